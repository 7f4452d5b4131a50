#pragma once

namespace hdqkd {

// Decomposition of the end-to-end transmittance eta = h_dc * eta_coup *
// eta_fib * eta_det. The interferometer transmittance eta_i is not part of
// eta; it only enters the phase-basis detection exponents.
struct ChannelBudget {
  double h_dc = 0.0;       // wireless DC gain
  double eta_coup = 0.0;   // air-to-fiber coupling
  double eta_fib = 0.0;    // fiber spans plus both AWGs
  double eta_det = 0.0;    // detector quantum efficiency
  double eta_total = 0.0;

  static ChannelBudget make(double h_dc, double eta_coup, double eta_fib, double eta_det) {
    return {h_dc, eta_coup, eta_fib, eta_det, h_dc * eta_coup * eta_fib * eta_det};
  }
};

// Background noise at the receiver, photons per detection gate.
struct NoiseBudget {
  double raman_forward = 0.0;
  double raman_backward = 0.0;
  double ambient = 0.0;
  double dark = 0.0;
  double n_total = 0.0;

  static NoiseBudget make(double raman_fwd, double raman_bwd, double ambient, double dark) {
    return {raman_fwd, raman_bwd, ambient, dark, raman_fwd + raman_bwd + ambient + dark};
  }
};

}  // namespace hdqkd
