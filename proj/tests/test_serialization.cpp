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

#include <random>

#include "envlab/errors.hpp"
#include "envlab/serialization.hpp"
#include "oracles.hpp"

using namespace envlab;

TEST_SUITE("serialization") {
  TEST_CASE("state round trip is exact") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
      const auto s = oracle::random_state(SpaceLayout{{"S", 2}, {"E1", 3}, {"E2", 2}}, rng);
      const auto back = state_from_json(Json::parse(state_to_json(s).dump()));
      CHECK(back.layout() == s.layout());
      CHECK((back.amplitudes() - s.amplitudes()).cwiseAbs().maxCoeff() <= 1e-15);
    }
  }

  TEST_CASE("plain reals are accepted as amplitudes") {
    const auto doc = Json::parse(R"({"layout":[{"label":"S","dim":2}],"amplitudes":[0.6,[0,0.8]]})");
    const auto s = state_from_json(doc);
    CHECK(s.amplitudes()(0) == Complex(0.6, 0.0));
    CHECK(s.amplitudes()(1) == Complex(0.0, 0.8));
  }

  TEST_CASE("malformed documents") {
    const auto code = [](const char* text) {
      try {
        state_from_json(Json::parse(text));
      } catch (const Error& e) {
        return e.code();
      }
      return ErrorCode::IoError;
    };
    CHECK(code(R"({"layout":[]})") == ErrorCode::InvalidArgument);
    CHECK(code(R"({"layout":[{"label":"S"}],"amplitudes":[1]})") == ErrorCode::InvalidArgument);
    CHECK(code(R"({"layout":[{"label":"S","dim":2}],"amplitudes":[1,"x"]})") == ErrorCode::InvalidArgument);
    CHECK(code(R"({"layout":[{"label":"S","dim":2}],"amplitudes":[1,1]})") == ErrorCode::InvalidState);
    CHECK(code(R"({"layout":[{"label":"S","dim":2}],"amplitudes":[1]})") == ErrorCode::LayoutMismatch);
  }

  TEST_CASE("verdict with and without an undo") {
    Vector bell = Vector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const PureState s(SpaceLayout{{"S", 2}, {"E", 2}}, bell);
    Matrix x = Matrix::Zero(2, 2);
    x(0, 1) = x(1, 0) = 1.0;
    const auto yes = verdict_to_json(is_envariant(s, SubsystemUnitary({"S"}, x), {"E"}));
    CHECK(yes["envariant"] == true);
    const auto undo = unitary_from_json(yes["undo"]);
    CHECK(undo.targets() == LabelSet{"E"});
    CHECK((undo.matrix() - x).norm() < 1e-10);

    const auto skewed = PureState::basis(SpaceLayout{{"S", 2}, {"E", 2}}, {0, 0});
    const auto no = verdict_to_json(is_envariant(skewed, SubsystemUnitary({"S"}, x), {"E"}));
    CHECK(no["envariant"] == false);
    CHECK(no["undo"].is_null());
    CHECK(no["residual"].is_null());
    CHECK(no["system_trace_distance"].get<double>() == doctest::Approx(1.0));
  }

  TEST_CASE("bound document") {
    const double c = std::cos(1.0);
    Vector v = Vector::Zero(4);
    v(0) = c;
    v(3) = std::sin(1.0);
    const auto doc = bound_to_json(rational_bounds(PureState(SpaceLayout{{"S", 2}, {"E", 2}}, v), {"S"}, 1000));
    CHECK(doc["m_used"] == 1000);
    CHECK(doc["lower"][0].get<double>() == 0.291);
    CHECK(doc["upper"][0].get<double>() == 0.292);
    CHECK(doc["lower_counts"][1] == 708);
  }
}
