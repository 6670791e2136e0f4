#pragma once

// Capacitive-network map from a two-transmon circuit to the dimensionless
// dissipative weights. The qubits couple to the common line through CL and
// CR; C1, C2 are the transmon shunt capacitances.

#include "qsync/types.hpp"

namespace qsync {

struct CircuitSpec {
  double c1 = 0.0; // transmon 1 shunt capacitance
  double c2 = 0.0; // transmon 2 shunt capacitance
  double cl = 0.0; // left coupling capacitance
  double cr = 0.0; // right coupling capacitance
};

struct CircuitWeights {
  double g1 = 0.0;
  double g2 = 0.0;
};

// g1 = CL (C1 + C2) / ((CL + C1)(CL + CR)),
// g2 = CR (C1 + C2) / ((CR + C2)(CL + CR)).
// Symmetric networks (C1 = C2, CL = CR) give g1 = g2; detuning the coupling
// capacitances steers the weights continuously, with g -> 0 as the
// corresponding coupler closes.
inline CircuitWeights map_circuit(const CircuitSpec& c) {
  if (!(c.c1 > 0.0) || !(c.c2 > 0.0) || !(c.cl > 0.0) || !(c.cr > 0.0))
    throw InvalidCapacitance("map_circuit: all capacitances must be positive");
  CircuitWeights w;
  const double csum = c.c1 + c.c2;
  const double line = c.cl + c.cr;
  w.g1 = c.cl * csum / ((c.cl + c.c1) * line);
  w.g2 = c.cr * csum / ((c.cr + c.c2) * line);
  return w;
}

} // namespace qsync
