#pragma once

// Pilot design framework: a block is d = S d_r + T d_d, where d_r is a known
// reference sequence and d_d the data. The conventional scheme inserts d_r
// verbatim; the precancelling scheme solves for pilots that force the
// frequency-domain transmit samples at the bins I to equal d_r.

#include <gfdm/modem.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace gfdm {

/// Ordered pilot positions inside d. P1 selects them in order, P2 selects the
/// remaining positions in ascending order.
class PilotPlacement {
public:
  PilotPlacement() = default;

  PilotPlacement(std::vector<Index> positions, Index d) : pilots_(std::move(positions)), d_(d) {
    if (d < 1)
      throw InvalidDimension("PilotPlacement: block length must be >= 1");
    std::vector<char> used(static_cast<std::size_t>(d), 0);
    for (Index i : pilots_) {
      if (i < 0 || i >= d)
        throw InvalidParameter("PilotPlacement: position " + std::to_string(i) + " outside block");
      if (used[static_cast<std::size_t>(i)])
        throw InvalidParameter("PilotPlacement: duplicate position " + std::to_string(i));
      used[static_cast<std::size_t>(i)] = 1;
    }
    for (Index i = 0; i < d; ++i)
      if (!used[static_cast<std::size_t>(i)])
        data_.push_back(i);
  }

  Index D() const { return d_; }
  Index p() const { return static_cast<Index>(pilots_.size()); }
  const std::vector<Index> &pilot_positions() const { return pilots_; }
  const std::vector<Index> &data_positions() const { return data_; }

  ComplexMatrix P1() const { return selection(pilots_); }
  ComplexMatrix P2() const { return selection(data_); }

  /// d = P1 d_p + P2 d_d.
  ComplexVector assemble(const ComplexVector &d_p, const ComplexVector &d_d) const {
    if (d_p.size() != p() || d_d.size() != d_ - p())
      throw InvalidDimension("assemble: pilot/data lengths do not match placement");
    ComplexVector d(d_);
    scatter(d, pilots_, d_p);
    scatter(d, data_, d_d);
    return d;
  }

  ComplexVector extract_pilots(const ComplexVector &d) const { return gather(d, pilots_); }
  ComplexVector extract_data(const ComplexVector &d) const { return gather(d, data_); }

private:
  ComplexMatrix selection(const std::vector<Index> &idx) const {
    ComplexMatrix s = ComplexMatrix::Zero(d_, static_cast<Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c)
      s(idx[c], static_cast<Index>(c)) = 1.0;
    return s;
  }

  static void scatter(ComplexVector &d, const std::vector<Index> &idx, const ComplexVector &v) {
    for (std::size_t i = 0; i < idx.size(); ++i)
      d(idx[i]) = v(static_cast<Index>(i));
  }

  ComplexVector gather(const ComplexVector &d, const std::vector<Index> &idx) const {
    if (d.size() != d_)
      throw InvalidDimension("extract: block length mismatch");
    ComplexVector v(static_cast<Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
      v(static_cast<Index>(i)) = d(idx[i]);
    return v;
  }

  std::vector<Index> pilots_;
  std::vector<Index> data_;
  Index d_ = 0;
};

/// Zero-based frequency bins I at which the precancelling scheme pins x_f.
struct FrequencyBinSet {
  std::vector<Index> bins;

  Index size() const { return static_cast<Index>(bins.size()); }

  void validate(Index d) const {
    std::vector<char> used(static_cast<std::size_t>(d), 0);
    for (Index b : bins) {
      if (b < 0 || b >= d)
        throw InvalidParameter("frequency bin " + std::to_string(b) + " outside 0..D-1");
      if (used[static_cast<std::size_t>(b)])
        throw InvalidParameter("duplicate frequency bin " + std::to_string(b));
      used[static_cast<std::size_t>(b)] = 1;
    }
  }

  ComplexVector select(const ComplexVector &v) const {
    ComplexVector out(size());
    for (Index i = 0; i < size(); ++i)
      out(i) = v(bins[static_cast<std::size_t>(i)]);
    return out;
  }
};

enum class PilotKind { Conventional, ProposedPrecancel, OfdmComb };

inline std::string to_string(PilotKind k) {
  switch (k) {
  case PilotKind::Conventional:
    return "conventional";
  case PilotKind::ProposedPrecancel:
    return "proposed";
  case PilotKind::OfdmComb:
    return "ofdm";
  }
  return "unknown";
}

/// W1 = [W_D A P]_{I, 0:p}, W2 = [W_D A P]_{I, p:D}.
struct BinBlocks {
  ComplexMatrix W1;
  ComplexMatrix W2;
  double condition = 1.0;
};

struct PilotScheme {
  PilotKind kind = PilotKind::Conventional;
  PilotPlacement placement;
  FrequencyBinSet bins;
  ComplexVector d_r;
  ComplexMatrix S; // D x p
  ComplexMatrix T; // D x (D-p)

  // precancelling schemes only: factored W1 and W2 for per-block pilot solves
  std::optional<numerics::LinearSolver> w1_solver;
  ComplexMatrix W2;

  Index D() const { return placement.D(); }
  Index p() const { return placement.p(); }
};

/// A generated block with its pilot part.
struct GeneratedBlock {
  ComplexVector d;
  ComplexVector d_p;
};

namespace pilot {

/// Pilots on subsymbol 0 across all subcarriers: positions 0..K-1 (P = I_D).
inline PilotPlacement default_placement(Index K, Index M) {
  std::vector<Index> pos(static_cast<std::size_t>(K));
  for (Index k = 0; k < K; ++k)
    pos[static_cast<std::size_t>(k)] = k;
  return PilotPlacement(std::move(pos), K * M);
}

/// Subcarrier-centre bins {0, M, 2M, ..., (K-1)M}.
inline FrequencyBinSet default_bins(Index K, Index M) {
  FrequencyBinSet s;
  for (Index k = 0; k < K; ++k)
    s.bins.push_back(k * M);
  return s;
}

/// p constant-modulus QPSK symbols of energy Es drawn from a seeded stream.
inline ComplexVector reference_sequence(Index p, double es, std::uint64_t seed) {
  if (p < 1)
    throw InvalidParameter("reference_sequence: need p >= 1");
  std::mt19937_64 rng(seed);
  const double a = std::sqrt(es / 2.0);
  ComplexVector r(p);
  for (Index i = 0; i < p; ++i) {
    const auto bits = rng();
    r(i) = cdouble(bits & 1u ? -a : a, bits & 2u ? -a : a);
  }
  return r;
}

/// Row-selected blocks of W_D A P for a precomputed W_D A.
inline BinBlocks build_w1_w2_from_wa(const ComplexMatrix &wa, const PilotPlacement &pl,
                                     const FrequencyBinSet &bins) {
  const Index p = pl.p();
  if (bins.size() != p)
    throw InvalidDimension("build_w1_w2: |I| must equal the pilot count p");
  bins.validate(wa.rows());
  BinBlocks b;
  b.W1.resize(p, p);
  b.W2.resize(p, pl.D() - p);
  for (Index r = 0; r < p; ++r) {
    const Index row = bins.bins[static_cast<std::size_t>(r)];
    for (Index c = 0; c < p; ++c)
      b.W1(r, c) = wa(row, pl.pilot_positions()[static_cast<std::size_t>(c)]);
    for (Index c = 0; c < pl.D() - p; ++c)
      b.W2(r, c) = wa(row, pl.data_positions()[static_cast<std::size_t>(c)]);
  }
  b.condition = p == 0 ? 1.0 : numerics::condition_estimate(b.W1);
  if (!(b.condition <= numerics::kMaxCondition))
    throw BinSelectionError("W1 is not invertible for the chosen frequency bins", b.condition);
  return b;
}

inline BinBlocks build_w1_w2(const ComplexMatrix &a, const PilotPlacement &pl,
                             const FrequencyBinSet &bins) {
  if (a.rows() != pl.D() || a.cols() != pl.D())
    throw InvalidDimension("build_w1_w2: A does not match the placement block length");
  return build_w1_w2_from_wa(numerics::dft_columns(a), pl, bins);
}

/// (S, T) = (P1 W1^{-1}, P2 - P1 W1^{-1} W2), with W1^{-1} applied by solves.
struct DesignMatrices {
  ComplexMatrix S;
  ComplexMatrix T;
};

inline DesignMatrices proposed_design(const BinBlocks &blocks, const PilotPlacement &pl) {
  numerics::LinearSolver w1(blocks.W1, "proposed_design");
  const ComplexMatrix w1_inv_w2 = w1.solve(blocks.W2);
  const ComplexMatrix w1_inv = w1.solve(ComplexMatrix::Identity(pl.p(), pl.p()));
  DesignMatrices st{ComplexMatrix::Zero(pl.D(), pl.p()), pl.P2()};
  for (Index r = 0; r < pl.p(); ++r) {
    const Index row = pl.pilot_positions()[static_cast<std::size_t>(r)];
    st.S.row(row) = w1_inv.row(r);
    st.T.row(row) -= w1_inv_w2.row(r);
  }
  return st;
}

inline DesignMatrices proposed_design(const ComplexMatrix &a, const PilotPlacement &pl,
                                      const FrequencyBinSet &bins) {
  return proposed_design(build_w1_w2(a, pl, bins), pl);
}

/// S = P1, T = P2: pilots carry d_r unchanged.
inline PilotScheme conventional_scheme(PilotPlacement pl, FrequencyBinSet bins, ComplexVector d_r,
                                       PilotKind kind = PilotKind::Conventional) {
  if (d_r.size() != pl.p())
    throw InvalidDimension("conventional_scheme: reference length must equal pilot count");
  PilotScheme s;
  s.kind = kind;
  s.S = pl.P1();
  s.T = pl.P2();
  s.placement = std::move(pl);
  s.bins = std::move(bins);
  s.d_r = std::move(d_r);
  return s;
}

inline PilotScheme proposed_scheme(const TransmitterMatrix &tm, PilotPlacement pl,
                                   FrequencyBinSet bins, ComplexVector d_r) {
  if (d_r.size() != pl.p())
    throw InvalidDimension("proposed_scheme: reference length must equal pilot count");
  BinBlocks blocks = build_w1_w2(tm.A, pl, bins);
  DesignMatrices st = proposed_design(blocks, pl);
  PilotScheme s;
  s.kind = PilotKind::ProposedPrecancel;
  s.S = std::move(st.S);
  s.T = std::move(st.T);
  s.w1_solver.emplace(blocks.W1, "proposed_scheme");
  s.W2 = std::move(blocks.W2);
  s.placement = std::move(pl);
  s.bins = std::move(bins);
  s.d_r = std::move(d_r);
  return s;
}

/// d = S d_r + T d_d. The precancelling scheme solves d_p = W1^{-1}(d_r - W2 d_d)
/// directly instead of multiplying through the dense S and T.
inline GeneratedBlock generate_block(const PilotScheme &scheme, const ComplexVector &d_d) {
  if (d_d.size() != scheme.D() - scheme.p())
    throw InvalidDimension("generate_block: data length must be D - p");
  GeneratedBlock out;
  if (scheme.kind == PilotKind::ProposedPrecancel && scheme.w1_solver)
    out.d_p = scheme.w1_solver->solve(ComplexVector(scheme.d_r - scheme.W2 * d_d));
  else if (scheme.kind == PilotKind::ProposedPrecancel)
    out.d_p = scheme.placement.extract_pilots(scheme.S * scheme.d_r + scheme.T * d_d);
  else
    out.d_p = scheme.d_r;
  out.d = scheme.placement.assemble(out.d_p, d_d);
  return out;
}

/// Average per-pilot energy ||d_p||^2 / p.
inline double pilot_energy(const ComplexVector &d_p) {
  return d_p.size() == 0 ? 0.0 : d_p.squaredNorm() / static_cast<double>(d_p.size());
}

} // namespace pilot
} // namespace gfdm
