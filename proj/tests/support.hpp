#pragma once

#include <doctest.h>

// Relative comparison. doctest's Approx adds an absolute scale of 1 by
// default, which would make checks on 1e-5-sized quantities vacuous; the tiny
// scale kept here only lets exact zeros compare equal.
inline doctest::Approx near(double value, double rel = 1e-12) {
    return doctest::Approx(value).epsilon(rel).scale(1e-300);
}
