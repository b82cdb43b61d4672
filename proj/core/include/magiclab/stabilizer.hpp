#pragma once

#include <vector>

#include "magiclab/types.hpp"

namespace magiclab {

/// Clifford generators on n qudits: Fourier and phase gate on every qudit and
/// the sum gate on every ordered pair.
std::vector<Matrix> clifford_generators(int d, int n);

/// Pure stabilizer states (as projectors) on n qudits, enumerated as the
/// Clifford orbit of |0...0>. There are d^n prod_{k=1..n} (d^k + 1) of them.
std::vector<Matrix> stabilizer_states(int d, int n);

}  // namespace magiclab
