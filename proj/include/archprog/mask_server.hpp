#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "archprog/tokens.hpp"

namespace archprog {

/// Answers one request line `{"prefix": [int, ...]}` with
/// `{"valid": [int, ...], "accept": bool}`, where `valid` lists the ids the
/// automaton permits next (an empty prefix permits only ⟨BOS⟩) and `accept`
/// is true once the prefix ends with ⟨EOS⟩. A malformed request yields
/// `{"error": str}`, a rejected prefix `{"error": str, "position": int,
/// "expected": [int, ...]}`.
std::string mask_response(const Fsm& fsm, std::string_view request);

/// Reads requests line by line until EOF, writing and flushing one response
/// per non-blank line. Returns the number of requests served.
std::size_t serve_masks(std::istream& in, std::ostream& out, const Fsm& fsm);

} // namespace archprog
