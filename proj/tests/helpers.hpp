#pragma once

#include <gtest/gtest.h>

#include "carnot/approximator.hpp"
#include "carnot/verify.hpp"

namespace carnot {

inline void PrintTo(const StratifiedPolynomial& p, std::ostream* os) { *os << to_string(p); }

}  // namespace carnot

namespace carnot::test {

inline const std::vector<std::string> kGroups{"heisenberg1", "heisenberg2", "free_step2_3", "engel"};

inline StratifiedPolynomial poly(const std::string& text, const GroupPtr& g) {
  return ScalarField::parse(text, g).polynomial();
}

inline ExactElement elem(const GroupPtr& g, std::vector<Rational> c) { return make_element<Rational>(g, std::move(c)); }

inline NumericElement nelem(const GroupPtr& g, std::vector<double> c) { return make_element<double>(g, std::move(c)); }

template <class F>
void expect_error(ErrorKind kind, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << error_name(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

}  // namespace carnot::test
