#pragma once

#include <catch2/catch_amalgamated.hpp>

#include "flowgraph/error.hpp"

// Checks that `expr` throws a flowgraph::Error carrying `expected_code`.
#define REQUIRE_THROWS_CODE(expr, expected_code)                               \
  do {                                                                         \
    bool thrown_ = false;                                                      \
    try {                                                                      \
      (void)(expr);                                                            \
    } catch (const flowgraph::Error& e_) {                                     \
      thrown_ = true;                                                          \
      INFO(e_.what());                                                         \
      CHECK(e_.code() == (expected_code));                                     \
    }                                                                          \
    CHECK(thrown_);                                                            \
  } while (false)
