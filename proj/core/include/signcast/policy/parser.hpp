#pragma once

// Policy text grammar:
//
//   policy  := or_expr
//   or_expr := and_expr ("or" and_expr)*
//   and_expr:= primary ("and" primary)*
//   primary := attribute | "(" policy ")" | "(" policy ("," policy)* ")" "@" k
//
// A chain of "and"/"or" at one level becomes a single n-ary gate; "@k" is a
// k-of-n gate over the listed children. Keywords are lower case and must be
// separated by whitespace.

#include <cstddef>
#include <string>
#include <string_view>

#include "signcast/errors.hpp"
#include "signcast/policy/access_tree.hpp"

namespace signcast::policy {

class PolicyParseError : public ArgumentError {
 public:
  PolicyParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

AccessTree ParsePolicy(std::string_view text);

}  // namespace signcast::policy
