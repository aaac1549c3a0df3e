// Copyright 2026 The envlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "envlab/envariance.hpp"
#include "envlab/errors.hpp"
#include "envlab/kernels.hpp"
#include "envlab/measurement.hpp"
#include "oracles.hpp"

using namespace envlab;

namespace {

const double kSqrtHalf = 1.0 / std::sqrt(2.0);

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an envlab::Error");
  return ErrorCode::InvalidArgument;
}

// Σ_k √w_k |k>_S |k>_E on S(ds) ⊗ E(de)
PureState diagonal_state(const std::vector<double>& weights, std::size_t ds, std::size_t de) {
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(ds * de));
  for (std::size_t k = 0; k < weights.size(); ++k) amps(static_cast<Eigen::Index>(k * de + k)) = std::sqrt(weights[k]);
  return PureState(SpaceLayout{{"S", ds}, {"E", de}}, amps);
}

// (√2|0>|+> + |2>|2>)/√3 on a qutrit system and qutrit environment
PureState worked_example() {
  Vector amps = Vector::Zero(9);
  const double r = 1.0 / std::sqrt(3.0);
  amps(0 * 3 + 0) = std::sqrt(2.0) * r * kSqrtHalf;
  amps(0 * 3 + 1) = std::sqrt(2.0) * r * kSqrtHalf;
  amps(2 * 3 + 2) = r;
  return PureState(SpaceLayout{{"S", 3}, {"E", 3}}, amps);
}

PureState with_ancilla(const PureState& s, std::size_t dim) {
  return tensor_product(s, PureState::basis(SpaceLayout{{"ancilla", dim}}, {0}));
}

// term-enumeration oracle: decode every nonzero amplitude and tally the
// system index it carries
struct Terms {
  std::size_t count = 0;
  double min_magnitude = 1e300, max_magnitude = 0.0;
  std::map<std::size_t, std::size_t> per_system;
};

Terms enumerate_terms(const PureState& s, std::size_t system_axis) {
  Terms t;
  const auto dims = s.layout().dims();
  for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i) {
    const double mag = std::abs(s.amplitudes()(i));
    if (mag < 1e-9) continue;
    ++t.count;
    t.min_magnitude = std::min(t.min_magnitude, mag);
    t.max_magnitude = std::max(t.max_magnitude, mag);
    ++t.per_system[oracle::decode(static_cast<std::size_t>(i), dims)[system_axis]];
  }
  return t;
}

Matrix rho_s(const PureState& s) { return oracle::partial_trace(s.amplitudes(), s.layout().dims(), {0}); }

}  // namespace

TEST_SUITE("schmidt_phase_unitary") {
  TEST_CASE("zero phases give the identity") {
    const auto sd = schmidt_decompose(diagonal_state({0.8, 0.2}, 2, 2), {"S"});
    CHECK((schmidt_phase_unitary(sd, {0.0, 0.0}).matrix() - Matrix::Identity(2, 2)).norm() < 1e-15);
  }

  TEST_CASE("phases (0, pi) on a Bell state") {
    const auto sd = schmidt_decompose(diagonal_state({0.5, 0.5}, 2, 2), {"S"});
    const Matrix u = schmidt_phase_unitary(sd, {0.0, std::numbers::pi}).matrix();
    const Matrix in_frame = sd.left_basis.adjoint() * u * sd.left_basis;
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = 1.0;
    expected(1, 1) = -1.0;
    CHECK((in_frame - expected).norm() < 1e-12);
  }

  TEST_CASE("environment mirror with opposite phases restores the state") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
      const auto s = oracle::random_state(SpaceLayout{{"S", 3}, {"E", 4}}, rng);
      const auto sd = schmidt_decompose(s, {"S"});
      std::vector<double> phases, opposite;
      for (std::size_t k = 0; k < sd.rank(); ++k) {
        phases.push_back(std::uniform_real_distribution<double>(0.0, 6.3)(rng));
        opposite.push_back(-phases.back());
      }
      const auto restored =
          apply_unitary(apply_unitary(s, schmidt_phase_unitary(sd, phases)), environment_phase_unitary(sd, opposite));
      CHECK((restored.amplitudes() - s.amplitudes()).norm() < 1e-12);
    }
  }

  TEST_CASE("length mismatch") {
    const auto sd = schmidt_decompose(diagonal_state({0.8, 0.2}, 2, 2), {"S"});
    CHECK(code_of([&] { schmidt_phase_unitary(sd, {0.0}); }) == ErrorCode::LengthMismatch);
  }
}

TEST_SUITE("is_envariant") {
  TEST_CASE("Schmidt phases are envariant") {
    const auto s = diagonal_state({0.8, 0.2}, 2, 2);
    const auto sd = schmidt_decompose(s, {"S"});
    const auto verdict = is_envariant(s, schmidt_phase_unitary(sd, {0.3, 1.9}), {"E"});
    CHECK(verdict.envariant);
    REQUIRE(verdict.undo.has_value());
    CHECK(verdict.residual < 1e-10);
    const auto moved = apply_unitary(s, schmidt_phase_unitary(sd, {0.3, 1.9}));
    CHECK(global_phase_distance(apply_unitary(moved, *verdict.undo), s) < 1e-10);
  }

  TEST_CASE("bit flip on an unequal state is not") {
    const auto s = diagonal_state({0.8, 0.2}, 2, 2);
    Matrix x = Matrix::Zero(2, 2);
    x(0, 1) = x(1, 0) = 1.0;
    const auto verdict = is_envariant(s, SubsystemUnitary({"S"}, x), {"E"});
    CHECK_FALSE(verdict.envariant);
    CHECK_FALSE(verdict.undo.has_value());
    // oracle: ρ_S goes from diag(0.8, 0.2) to diag(0.2, 0.8)
    CHECK(std::abs(verdict.system_trace_distance - 0.6) < 1e-12);
    CHECK_FALSE(verdict.reason.empty());
  }

  TEST_CASE("any unitary on one side of a Bell state, undone by its conjugate") {
    std::mt19937_64 rng(32);
    const auto bell = diagonal_state({0.5, 0.5}, 2, 2);
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix u = oracle::haar_unitary(2, rng);
      const auto verdict = is_envariant(bell, SubsystemUnitary({"S"}, u), {"E"});
      CHECK(verdict.envariant);
      REQUIRE(verdict.undo.has_value());
      CHECK((verdict.undo->matrix() - u.conjugate()).norm() < 1e-10);
      const auto mirrored = apply_unitary(apply_unitary(bell, SubsystemUnitary({"S"}, u)), SubsystemUnitary({"E"}, u.conjugate()));
      CHECK((mirrored.amplitudes() - bell.amplitudes()).norm() < 1e-12);
    }
  }

  TEST_CASE("soundness and necessity on random states and unitaries") {
    std::mt19937_64 rng(33);
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    int positives = 0;
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t ds = std::max<std::size_t>(2, dim(rng)), de = dim(rng);
      const auto s = oracle::random_state(SpaceLayout{{"S", ds}, {"E", de}}, rng);
      const auto sd = schmidt_decompose(s, {"S"});
      // alternate arbitrary unitaries with Schmidt-phase ones
      SubsystemUnitary u({"S"}, oracle::haar_unitary(ds, rng));
      if (trial % 2 == 1) {
        std::vector<double> phases;
        for (std::size_t k = 0; k < sd.rank(); ++k) phases.push_back(std::uniform_real_distribution<double>(0.0, 6.3)(rng));
        u = schmidt_phase_unitary(sd, phases);
        const Matrix before = rho_s(s), after = rho_s(apply_unitary(s, u));
        CHECK((before - after).cwiseAbs().maxCoeff() < 1e-12);
      }
      const auto verdict = is_envariant(s, u, {"E"});
      if (trial % 2 == 1) CHECK(verdict.envariant);
      if (verdict.envariant) {
        ++positives;
        REQUIRE(verdict.undo.has_value());
        CHECK(verdict.residual < 1e-10);
        CHECK(global_phase_distance(apply_unitary(apply_unitary(s, u), *verdict.undo), s) < 1e-10);
      } else {
        CHECK(verdict.system_trace_distance > 1e-10);
        const Matrix diff = rho_s(s) - rho_s(apply_unitary(s, u));
        CHECK(std::abs(kernels::trace_distance(rho_s(s), rho_s(apply_unitary(s, u))) - verdict.system_trace_distance) < 1e-10);
        CHECK(diff.cwiseAbs().maxCoeff() > 0.0);
      }
    }
    CHECK(positives >= 30);
  }

  TEST_CASE("multi-label sides") {
    std::mt19937_64 rng(34);
    const auto s = oracle::random_state(SpaceLayout{{"E1", 2}, {"S", 2}, {"E2", 2}}, rng);
    const auto sd = schmidt_decompose(s, {"S"});
    const auto verdict = is_envariant(s, schmidt_phase_unitary(sd, {0.5, 2.0}), {"E1", "E2"});
    CHECK(verdict.envariant);
    CHECK(verdict.residual < 1e-10);
  }

  TEST_CASE("errors") {
    const auto s = diagonal_state({0.8, 0.2}, 2, 2);
    CHECK(code_of([&] { is_envariant(s, SubsystemUnitary({"E"}, Matrix::Identity(2, 2)), {"E"}); }) ==
          ErrorCode::SideViolation);
    CHECK(code_of([&] { is_envariant(s, SubsystemUnitary({"S"}, Matrix::Identity(2, 2)), {"S", "E"}); }) ==
          ErrorCode::InvalidBipartition);
  }
}

TEST_SUITE("envariant_swap") {
  TEST_CASE("equal amplitudes: counterswap restores") {
    const auto s = diagonal_state({0.5, 0.5}, 2, 2);
    const auto sd = schmidt_decompose(s, {"S"});
    const auto [swapped, counter] = envariant_swap(s, 0, 1, sd);
    CHECK((swapped.amplitudes() - s.amplitudes()).norm() > 0.1);
    CHECK((apply_unitary(swapped, counter).amplitudes() - s.amplitudes()).norm() < 1e-10);
  }

  TEST_CASE("k = l is the identity") {
    const auto s = diagonal_state({0.7, 0.3}, 2, 2);
    const auto sd = schmidt_decompose(s, {"S"});
    const auto [swapped, counter] = envariant_swap(s, 1, 1, sd);
    CHECK((swapped.amplitudes() - s.amplitudes()).norm() < 1e-15);
    CHECK((counter.matrix() - Matrix::Identity(2, 2)).norm() < 1e-15);
  }

  TEST_CASE("unequal amplitudes exchange the coefficients") {
    const auto s = diagonal_state({0.8, 0.2}, 2, 2);
    const auto sd = schmidt_decompose(s, {"S"});
    const auto [swapped, counter] = envariant_swap(s, 0, 1, sd);
    const auto result = apply_unitary(swapped, counter);
    // oracle: Σ α_{π(k)} |s_k>|ε_k> rebuilt directly
    const Vector exchanged = sd.coefficients(1) * oracle::outer_product(sd.left_basis.col(0), sd.right_basis.col(0)) +
                             sd.coefficients(0) * oracle::outer_product(sd.left_basis.col(1), sd.right_basis.col(1));
    CHECK((result.amplitudes() - exchanged).norm() < 1e-12);
    const double overlap = std::abs(exchanged.dot(s.amplitudes()));
    CHECK(std::abs(global_phase_distance(result, s) - std::sqrt(2.0 - 2.0 * overlap)) < 1e-12);
    CHECK(std::abs(global_phase_distance(result, s) - std::sqrt(0.4)) < 1e-12);
  }

  TEST_CASE("bad index") {
    const auto s = diagonal_state({0.5, 0.5}, 2, 2);
    const auto sd = schmidt_decompose(s, {"S"});
    CHECK(code_of([&] { envariant_swap(s, 0, 2, sd); }) == ErrorCode::BadIndex);
  }
}

TEST_SUITE("equal_amplitude_probabilities") {
  TEST_CASE("four equal terms") {
    const auto p = equal_amplitude_probabilities(diagonal_state({0.25, 0.25, 0.25, 0.25}, 4, 4), {"S"});
    CHECK(p == std::vector<double>(4, 0.25));
  }

  TEST_CASE("single term") {
    CHECK(equal_amplitude_probabilities(diagonal_state({1.0}, 2, 2), {"S"}) == std::vector<double>{1.0});
  }

  TEST_CASE("subsets add") {
    const auto s = diagonal_state({1.0 / 3, 1.0 / 3, 1.0 / 3}, 3, 3);
    CHECK(equal_amplitude_subset_probability(s, {"S"}, {1, 2}) == 2.0 / 3.0);
    CHECK(equal_amplitude_subset_probability(s, {"S"}, {}) == 0.0);
    CHECK(equal_amplitude_subset_probability(s, {"S"}, {0, 1, 2}) == 1.0);
  }

  TEST_CASE("errors") {
    CHECK(code_of([&] { equal_amplitude_probabilities(diagonal_state({0.8, 0.2}, 2, 2), {"S"}); }) ==
          ErrorCode::NotEqualAmplitude);
    const auto s = diagonal_state({0.5, 0.5}, 2, 2);
    CHECK(code_of([&] { equal_amplitude_subset_probability(s, {"S"}, {0, 0}); }) == ErrorCode::BadIndex);
    CHECK(code_of([&] { equal_amplitude_subset_probability(s, {"S"}, {2}); }) == ErrorCode::BadIndex);
  }
}

TEST_SUITE("fine_grain") {
  TEST_CASE("worked example: three equal terms") {
    const auto in = with_ancilla(worked_example(), 3);
    const auto plan = make_fine_graining_plan(worked_example(), {"S"}, "ancilla", 1e-12);
    CHECK(plan.counts == std::vector<std::size_t>{2, 1});
    CHECK(plan.total == 3);
    const auto out = fine_grain(in, plan);
    Vector expected = Vector::Zero(27);
    for (std::size_t t : {0u * 9 + 0 * 3 + 0, 0u * 9 + 1 * 3 + 1, 2u * 9 + 2 * 3 + 2}) expected(t) = 1.0 / std::sqrt(3.0);
    const PureState target(out.layout(), expected);
    CHECK(states_equal_up_to_global_phase(out, target, 1e-10));

    // the literal route: c-shift from the environment onto the ancilla
    const auto direct = controlled_shift(in, {"E"}, "ancilla");
    CHECK(states_equal_up_to_global_phase(direct, target, 1e-10));
  }

  TEST_CASE("already equal: two terms") {
    const auto s = diagonal_state({0.5, 0.5}, 2, 2);
    const FineGrainingPlan plan{{"S"}, {1, 1}, 2, "ancilla", 2, 1e-12};
    const auto terms = enumerate_terms(fine_grain(with_ancilla(s, 2), plan), 0);
    CHECK(terms.count == 2);
  }

  TEST_CASE("counts (3, 1, 4)") {
    const auto s = diagonal_state({3.0 / 8, 1.0 / 8, 4.0 / 8}, 3, 8);
    const auto plan = make_fine_graining_plan(s, {"S"}, "ancilla", 1e-12);
    CHECK(plan.counts == std::vector<std::size_t>{3, 1, 4});
    const auto out = fine_grain(with_ancilla(s, 8), plan);
    const auto terms = enumerate_terms(out, 0);
    CHECK(terms.count == 8);
    CHECK(std::abs(terms.min_magnitude - 1.0 / std::sqrt(8.0)) < 1e-12);
    CHECK(std::abs(terms.max_magnitude - 1.0 / std::sqrt(8.0)) < 1e-12);
    CHECK(terms.per_system == std::map<std::size_t, std::size_t>{{0, 3}, {1, 1}, {2, 4}});
    CHECK((rho_s(out) - rho_s(s)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(equal_amplitude_probabilities(out, {"S", "E"}).size() == 8);
  }

  TEST_CASE("system operator is preserved for rotated frames") {
    std::mt19937_64 rng(35);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t m = 4 + trial;
      std::vector<double> weights{1.0 / static_cast<double>(m), 0.0, 0.0};
      const std::size_t c1 = 1 + trial % (m - 2);
      weights[1] = static_cast<double>(c1) / static_cast<double>(m);
      weights[2] = 1.0 - weights[0] - weights[1];
      const auto base = diagonal_state(weights, 3, m);
      const auto s = apply_unitary(apply_unitary(base, SubsystemUnitary({"S"}, oracle::haar_unitary(3, rng))),
                                   SubsystemUnitary({"E"}, oracle::haar_unitary(m, rng)));
      const auto plan = make_fine_graining_plan(s, {"S"}, "ancilla", 1e-10);
      const auto out = fine_grain(with_ancilla(s, plan.total), plan);
      CHECK((rho_s(out) - rho_s(s)).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(out.amplitudes().norm() - 1.0) < 1e-10);
      CHECK(equal_amplitude_probabilities(out, {"S", "E"}).size() == plan.total);
    }
  }

  TEST_CASE("errors") {
    const auto s = diagonal_state({0.75, 0.25}, 2, 4);
    const auto plan = make_fine_graining_plan(s, {"S"}, "ancilla", 1e-12);
    CHECK(code_of([&] { fine_grain(with_ancilla(s, 3), plan); }) == ErrorCode::AncillaTooSmall);
    FineGrainingPlan wrong = plan;
    wrong.counts = {2, 2};
    CHECK(code_of([&] { fine_grain(with_ancilla(s, 4), wrong); }) == ErrorCode::PlanMismatch);
    wrong.counts = {4};
    CHECK(code_of([&] { fine_grain(with_ancilla(s, 4), wrong); }) == ErrorCode::PlanMismatch);
    const auto busy = tensor_product(s, PureState::basis(SpaceLayout{{"ancilla", 4}}, {1}));
    CHECK(code_of([&] { fine_grain(busy, plan); }) == ErrorCode::ApparatusNotReady);
    const auto cramped = diagonal_state({0.75, 0.25}, 2, 2);
    CHECK(code_of([&] { fine_grain(with_ancilla(cramped, 4), plan); }) == ErrorCode::DimensionMismatch);
  }
}

TEST_SUITE("born_probabilities") {
  TEST_CASE("worked example") {
    const auto p = born_probabilities(worked_example(), {"S"}, 1e-10);
    REQUIRE(p.size() == 2);
    CHECK(std::abs(p[0] - 2.0 / 3.0) < 1e-12);
    CHECK(std::abs(p[1] - 1.0 / 3.0) < 1e-12);
  }

  TEST_CASE("equal four-term state") {
    const auto p = born_probabilities(diagonal_state({0.25, 0.25, 0.25, 0.25}, 4, 4), {"S"}, 1e-10);
    CHECK(p == std::vector<double>(4, 0.25));
  }

  TEST_CASE("eighths on a small environment") {
    const auto p = born_probabilities(diagonal_state({3.0 / 8, 1.0 / 8, 4.0 / 8}, 3, 3), {"S"}, 1e-10);
    CHECK(p == std::vector<double>{0.375, 0.125, 0.5});
  }

  TEST_CASE("random rational spectra in random frames") {
    std::mt19937_64 rng(36);
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t d = 2 + trial % 3;
      const std::size_t m = std::uniform_int_distribution<std::size_t>(d, 64)(rng);
      // random composition of m into d positive parts
      std::vector<std::size_t> counts(d, 1);
      for (std::size_t extra = m - d; extra > 0; --extra) ++counts[std::uniform_int_distribution<std::size_t>(0, d - 1)(rng)];
      std::vector<double> weights;
      for (auto c : counts) weights.push_back(static_cast<double>(c) / static_cast<double>(m));
      const auto s = apply_unitary(diagonal_state(weights, d, d), SubsystemUnitary({"S"}, oracle::haar_unitary(d, rng)));
      const auto p = born_probabilities(s, {"S"}, 1e-10);
      const auto w = schmidt_weights(s, {"S"});
      REQUIRE(p.size() == w.size());
      for (std::size_t k = 0; k < p.size(); ++k) CHECK(std::abs(p[k] - w[k]) < 1e-10);
    }
  }

  TEST_CASE("irrational weight without a fitting denominator") {
    const double c = std::cos(1.0);
    const auto s = diagonal_state({c * c, 1.0 - c * c}, 2, 2);
    CHECK(code_of([&] { born_probabilities(s, {"S"}, 1e-10, 1000); }) == ErrorCode::UseBoundsInstead);
  }
}

TEST_SUITE("rational_bounds") {
  TEST_CASE("cos^2(1) at M = 1000") {
    const double c = std::cos(1.0);
    const auto b = rational_bounds(diagonal_state({c * c, 1.0 - c * c}, 2, 2), {"S"}, 1000);
    CHECK(b.m_used == 1000);
    CHECK(b.lower[0] == 0.291);
    CHECK(b.upper[0] == 0.292);
    CHECK(b.lower[0] <= c * c);
    CHECK(c * c <= b.upper[0]);
    CHECK(b.lower_counts[0] == 291);
    CHECK(b.upper_counts[0] == 292);
  }

  TEST_CASE("exact fractions have zero width") {
    const auto b = rational_bounds(diagonal_state({0.3, 0.7}, 2, 2), {"S"}, 10);
    CHECK(b.lower == b.upper);
    CHECK(std::abs(b.lower[0] - 0.3) < 1e-15);
  }

  TEST_CASE("width shrinks as 1/M and always contains the weight") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 10; ++trial) {
      const auto s = oracle::random_state(SpaceLayout{{"S", 3}, {"E", 3}}, rng);
      const auto w = schmidt_weights(s, {"S"});
      for (std::size_t m : {100u, 1000u, 10000u}) {
        const auto b = rational_bounds(s, {"S"}, m);
        double lo = 0.0, hi = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
          CHECK(b.lower[k] <= w[k]);
          CHECK(w[k] <= b.upper[k]);
          CHECK(b.upper[k] - b.lower[k] <= 2.0 / static_cast<double>(m));
          lo += b.lower[k];
          hi += b.upper[k];
        }
        CHECK(lo <= 1.0 + 1e-12);
        CHECK(hi >= 1.0 - 1e-12);
      }
    }
  }

  TEST_CASE("bounding states realize their endpoint") {
    const auto s = bounding_state(291, 1000);
    CHECK(std::abs(schmidt_weights(s, {"S"})[0] - 0.291) < 1e-12);
    const auto plan = make_fine_graining_plan(s, {"S"}, "ancilla", 1e-12, 1000);
    CHECK(plan.counts[0] * 1000 == 291 * plan.total);
  }

  TEST_CASE("M too small") {
    CHECK(code_of([&] { rational_bounds(diagonal_state({0.2, 0.3, 0.5}, 3, 3), {"S"}, 2); }) == ErrorCode::MTooSmall);
  }
}

TEST_SUITE("phase_sensitivity_witness") {
  PureState qutrit(double a0, double a1, double a2) {
    Vector v(3);
    v << a0, a1, a2;
    return PureState(SpaceLayout{{"S", 3}}, v / std::sqrt(3.0));
  }

  TEST_CASE("interference tells the pair apart until records are made") {
    const auto psi = qutrit(1, 1, -1), psi_prime = qutrit(-1, 1, 1);
    const auto w = phase_sensitivity_witness(psi, psi_prime);
    CHECK(w.observable_expectation_gap > 0.1);
    CHECK(w.post_entanglement_gap < 1e-12);

    // oracle: brute-force reduced operators after the record
    const auto ready = PureState::basis(SpaceLayout{{"E", 3}}, {0});
    const auto r1 = entangle_environment(tensor_product(psi, ready), "S", "E");
    const auto r2 = entangle_environment(tensor_product(psi_prime, ready), "S", "E");
    CHECK((rho_s(r1) - rho_s(r2)).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("global phase is invisible") {
    const auto psi = qutrit(1, 1, -1);
    const PureState rotated(psi.layout(), std::polar(1.0, 0.7) * psi.amplitudes());
    const auto w = phase_sensitivity_witness(psi, rotated);
    CHECK(w.observable_expectation_gap < 1e-12);
    CHECK(w.post_entanglement_gap < 1e-12);
  }

  TEST_CASE("layout mismatch") {
    const auto psi = qutrit(1, 1, -1);
    CHECK(code_of([&] { phase_sensitivity_witness(psi, PureState::basis(SpaceLayout{{"S", 2}}, {0})); }) ==
          ErrorCode::LayoutMismatch);
  }
}
