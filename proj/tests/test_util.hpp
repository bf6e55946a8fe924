#pragma once

#include "core/error.hpp"
#include "doctest.h"

// Expects the expression to throw spi::Error carrying the given code.
#define CHECK_ERR(expr, err)                            \
  do {                                                  \
    bool thrown__ = false;                              \
    try {                                               \
      (void)(expr);                                     \
    } catch (const spi::Error& e__) {                   \
      thrown__ = true;                                  \
      CHECK(e__.code() == (err));                       \
    }                                                   \
    CHECK_MESSAGE(thrown__, "expected " #expr " to throw"); \
  } while (0)
