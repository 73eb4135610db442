#pragma once

#include "mrt/circuit_model.hpp"

namespace mrt::test {

inline CircuitParams paper_circuit() {
  CircuitParams p;
  p.capacitance = 1.2e-12;
  p.inductance = 168e-12;
  p.critical_current = 8.531e-6;
  p.t1 = 25e-9;
  return p;
}

// Same junction with a hundred times less capacitance: a few dozen
// right-well states, so full sweeps take about a second.
inline CircuitParams small_circuit() {
  CircuitParams p = paper_circuit();
  p.capacitance = 12e-15;
  return p;
}

}  // namespace mrt::test
