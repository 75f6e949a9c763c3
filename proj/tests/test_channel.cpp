#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mop/channel.hpp"
#include "test_util.hpp"

using namespace mop;
using testutil::max_abs;
using testutil::pauli;

namespace {

// {sqrt(p) I, sqrt((1-p)/3) X, Y, Z}: a valid channel, though its
// parameter is not the p of rho -> p rho + (1-p) I/2.
std::vector<ComplexMatrix> pauli_mixture(double p) {
  const double w = std::sqrt((1.0 - p) / 3.0);
  return {std::sqrt(p) * pauli(0), w * pauli(1), w * pauli(2), w * pauli(3)};
}

// Pauli twirl form of rho -> p rho + (1-p) I/2, using
// sum_sigma sigma rho sigma = 2 Tr[rho] I - rho.
std::vector<ComplexMatrix> pauli_depolarizing(double p) {
  const double w = std::sqrt((1.0 - p) / 4.0);
  return {std::sqrt((1.0 + 3.0 * p) / 4.0) * pauli(0), w * pauli(1), w * pauli(2), w * pauli(3)};
}

ComplexMatrix ket0() {
  ComplexMatrix r = ComplexMatrix::Zero(2, 2);
  r(0, 0) = 1.0;
  return r;
}

}  // namespace

TEST_CASE("validate_channel accepts trace-preserving Kraus lists") {
  CHECK_NOTHROW(validate_channel({ComplexMatrix::Identity(2, 2)}));

  const auto kraus = pauli_mixture(0.5);
  // Oracle: sum K^dagger K computed directly.
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  for (const auto& k : kraus) s += k.adjoint() * k;
  REQUIRE(max_abs(s - ComplexMatrix::Identity(2, 2)) < 1e-15);
  const QuantumChannel ch = validate_channel(kraus);
  CHECK(ch.dim() == 2);
  CHECK(ch.kraus().size() == 4);
}

TEST_CASE("validate_channel rejects [I, I] with the deviation in the message") {
  try {
    validate_channel({ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)});
    FAIL("expected ChannelError");
  } catch (const ChannelError& e) {
    CHECK(std::string(e.what()).find("= 1") != std::string::npos);
  }
  CHECK(trace_preservation_deviation({ComplexMatrix::Identity(2, 2),
                                      ComplexMatrix::Identity(2, 2)}) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("validate_channel rejects shape mismatches and empty lists") {
  CHECK_THROWS_AS(validate_channel({}), ChannelError);
  CHECK_THROWS_WITH_AS(validate_channel({ComplexMatrix::Identity(2, 2), ComplexMatrix::Zero(3, 3)}),
                       doctest::Contains("Kraus operator 1"), ChannelError);
}

TEST_CASE("depolarizing generator") {
  std::mt19937_64 rng(3);
  const ComplexMatrix rho = testutil::random_density(2, rng);
  CHECK(max_abs(apply_channel(make_depolarizing(2, 1.0), rho) - rho) < 1e-15);
  CHECK(max_abs(apply_channel(make_depolarizing(2, 0.0), rho) -
                0.5 * ComplexMatrix::Identity(2, 2)) < 1e-15);

  // p rho + (1-p) I/2 on |0><0| is diag(0.75, 0.25).
  const ComplexMatrix out = apply_channel(make_depolarizing(2, 0.5), ket0());
  CHECK(std::abs(out(0, 0) - 0.75) < 1e-15);
  CHECK(std::abs(out(1, 1) - 0.25) < 1e-15);
  CHECK(std::abs(out(0, 1)) < 1e-15);

  // Agrees with the Pauli-twirl form of the same channel.
  const QuantumChannel pauli_form = validate_channel(pauli_depolarizing(0.5));
  CHECK(max_abs(apply_channel(pauli_form, rho) - apply_channel(make_depolarizing(2, 0.5), rho)) <
        1e-14);

  CHECK_THROWS_AS(make_depolarizing(2, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(make_depolarizing(0, 0.5), std::invalid_argument);
}

TEST_CASE("random channel generator") {
  SUBCASE("k = 1 is unitary") {
    const QuantumChannel ch = make_random_channel(2, 1, 11);
    std::mt19937_64 rng(5);
    const ComplexVector psi = testutil::random_unit(2, rng);
    const ComplexMatrix out = apply_channel(ch, ComplexMatrix(psi * psi.adjoint()));
    CHECK(std::abs(trace_power(out, 2).real() - 1.0) < 1e-13);
  }
  SUBCASE("k = 4 is trace preserving to round-off") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
      CHECK(trace_preservation_deviation(make_random_channel(2, 4, seed).kraus()) <= 1e-12);
  }
  SUBCASE("deterministic in the seed") {
    const auto a = make_random_channel(3, 2, 42).kraus();
    const auto b = make_random_channel(3, 2, 42).kraus();
    const auto c = make_random_channel(3, 2, 43).kraus();
    REQUIRE(a.size() == b.size());
    for (std::size_t m = 0; m < a.size(); ++m) CHECK(a[m] == b[m]);
    CHECK(a[0] != c[0]);
  }
}

TEST_CASE("Choi blocks") {
  SUBCASE("identity: assembled = 2 |omega><omega|") {
    const ChoiMatrix c = choi_of(make_depolarizing(2, 1.0));
    ComplexVector omega = ComplexVector::Zero(4);
    omega[0] = omega[3] = 1.0 / std::sqrt(2.0);
    CHECK(max_abs(c.assembled() - 2.0 * omega * omega.adjoint()) < 1e-15);
    CHECK(std::abs(c.assembled().trace() - 2.0) < 1e-15);
  }
  SUBCASE("completely depolarizing: block(a,b) = delta_ab I/2") {
    const ChoiMatrix c = choi_of(make_depolarizing(2, 0.0));
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        CHECK(max_abs(c.block(a, b) - (a == b ? 0.5 : 0.0) * ComplexMatrix::Identity(2, 2)) <
              1e-15);
    CHECK(std::abs(c.assembled().trace() - 2.0) < 1e-15);
  }
  SUBCASE("depolarizing p=0.5: spectrum {1.25, 0.25, 0.25, 0.25}") {
    // Oracle: assemble sum E_ab (x) Phi(E_ab) from the Pauli Kraus form and
    // diagonalize densely.
    const auto kraus = pauli_depolarizing(0.5);
    ComplexMatrix oracle = ComplexMatrix::Zero(4, 4);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        ComplexMatrix e = ComplexMatrix::Zero(2, 2);
        e(a, b) = 1.0;
        ComplexMatrix img = ComplexMatrix::Zero(2, 2);
        for (const auto& k : kraus) img += k * e * k.adjoint();
        oracle += testutil::kron(e, img);
      }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(oracle);
    const Eigen::VectorXd ev = es.eigenvalues();
    REQUIRE(std::abs(ev[3] - 1.25) < 1e-14);
    for (int i = 0; i < 3; ++i) REQUIRE(std::abs(ev[i] - 0.25) < 1e-14);

    const ChoiMatrix c = choi_of(make_depolarizing(2, 0.5));
    CHECK(max_abs(c.assembled() - oracle) < 1e-15);
  }
}

TEST_CASE("channel application: Kraus and Choi forms agree on random inputs") {
  std::mt19937_64 rng(17);
  for (int d = 2; d <= 4; ++d)
    for (int trial = 0; trial < 5; ++trial) {
      const QuantumChannel ch = make_random_channel(d, 3, 100 + trial);
      const ChoiMatrix choi = choi_of(ch);
      ComplexMatrix rho = testutil::random_density(d, rng);
      CHECK(max_abs(apply_channel(ch, rho) - apply_via_choi(choi, rho)) < 1e-12);
      // Arbitrary (non-Hermitian) inputs too: both forms are linear.
      ComplexMatrix x(d, d);
      for (int c = 0; c < d; ++c) x.col(c) = testutil::random_vector(d, rng);
      CHECK(max_abs(apply_channel(ch, x) - apply_via_choi(choi, x)) < 1e-12);
    }
}

TEST_CASE("adjoint map satisfies Tr[X Phi(rho)] = Tr[Phi*(X) rho]") {
  std::mt19937_64 rng(23);
  const QuantumChannel ch = make_random_channel(3, 4, 9);
  for (int t = 0; t < 5; ++t) {
    const ComplexMatrix rho = testutil::random_density(3, rng);
    const ComplexMatrix x = testutil::random_density(3, rng);
    const Complex lhs = (x * apply_channel(ch, rho)).trace();
    const Complex rhs = (apply_adjoint(ch, x) * rho).trace();
    CHECK(std::abs(lhs - rhs) < 1e-14);
  }
}

TEST_CASE("apply_channel rejects mismatched dimensions") {
  CHECK_THROWS_WITH_AS(apply_channel(make_depolarizing(2, 0.5), ComplexMatrix::Identity(3, 3)),
                       doctest::Contains("channel dimension is 2"), std::invalid_argument);
}

TEST_CASE("DensityMatrix validation") {
  CHECK_NOTHROW(DensityMatrix::from_matrix(ket0()));
  CHECK_THROWS_AS(DensityMatrix::from_matrix(ComplexMatrix::Identity(2, 2)), std::invalid_argument);
  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_WITH_AS(DensityMatrix::from_matrix(neg), doctest::Contains("negative eigenvalue"),
                       std::invalid_argument);
  ComplexMatrix nh = 0.5 * ComplexMatrix::Identity(2, 2);
  nh(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(nh), std::invalid_argument);

  std::mt19937_64 rng(1);
  const ComplexVector psi = testutil::random_unit(3, rng);
  CHECK(DensityMatrix::pure(2.0 * psi).purity() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(DensityMatrix::unchecked(0.5 * ComplexMatrix::Identity(2, 2)).purity() ==
        doctest::Approx(0.5));
}

TEST_CASE("JSON channel files") {
  SUBCASE("round trip") {
    const QuantumChannel ch = make_random_channel(2, 3, 8);
    const QuantumChannel back = channel_from_json(channel_to_json(ch));
    REQUIRE(back.kraus().size() == ch.kraus().size());
    for (std::size_t m = 0; m < ch.kraus().size(); ++m) CHECK(back.kraus()[m] == ch.kraus()[m]);
  }
  SUBCASE("identity file") {
    const auto ch =
        channel_from_json(R"({"d":2,"kraus":[[[[1,0],[0,0]],[[0,0],[1,0]]]]})");
    CHECK(ch.dim() == 2);
  }
  SUBCASE("malformed files name the defect") {
    CHECK_THROWS_WITH_AS(kraus_from_json("{"), doctest::Contains("not valid JSON"), ChannelError);
    CHECK_THROWS_WITH_AS(kraus_from_json(R"({"kraus":[]})"), doctest::Contains("\"d\""),
                         ChannelError);
    CHECK_THROWS_WITH_AS(kraus_from_json(R"({"d":2})"), doctest::Contains("\"kraus\""),
                         ChannelError);
    CHECK_THROWS_WITH_AS(
        kraus_from_json(R"({"d":2,"kraus":[[[[1,0],[0,0]],[[0,0],[1,0]]],[[[1,0],[0,0]]]]})"),
        doctest::Contains("Kraus matrix 1 must have 2 rows"), ChannelError);
    CHECK_THROWS_WITH_AS(kraus_from_json(R"({"d":2,"kraus":[[[[1,0],[0,0]],[[0,0]]]]})"),
                         doctest::Contains("Kraus matrix 0 is not square: row 1"), ChannelError);
    CHECK_THROWS_WITH_AS(kraus_from_json(R"({"d":2,"kraus":[[[[1,0],[0,0]],[[0,0],"x"]]]})"),
                         doctest::Contains("entry (1,1)"), ChannelError);
    CHECK_THROWS_WITH_AS(
        channel_from_json(R"({"d":2,"kraus":[[[[1,0],[0,0]],[[0,0],[1,0]]],[[[1,0],[0,0]],[[0,0],[1,0]]]]})"),
        doctest::Contains("not trace preserving"), ChannelError);
  }
}

TEST_CASE("trace_power") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 0.75;
  m(1, 1) = 0.25;
  CHECK(trace_power(m, 2).real() == doctest::Approx(0.625));
  CHECK(trace_power(m, 3).real() == doctest::Approx(0.4375));
  CHECK_THROWS_AS(trace_power(m, 0), std::invalid_argument);
}
