#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <variant>
#include <vector>

namespace qdw {

using cplx = std::complex<double>;

/// Tolerance used for every unitarity identity of the coin family.
inline constexpr double kUnitarityTol = 1e-12;

/// 2x2 coin U(theta) = (1/sqrt2) [[1, e^{i theta}], [e^{-i theta}, -1]], row-major.
struct CoinMatrix {
  cplx a, b, c, d;
  double theta = 0.0;

  cplx det() const { return a * d - b * c; }
};

/// Row-major 2x2 complex matrix.
using Mat2 = std::array<cplx, 4>;

/// Row split of a coin: P keeps the upper row (routes to x-1), Q the lower row (routes to x+1).
struct StepOperators {
  Mat2 P;
  Mat2 Q;
};

struct FixedDisorder {
  double theta;
};
struct UniformDisorder {};
struct DiscreteDisorder {
  std::vector<double> values;
  std::vector<double> weights;
};

/// Law of the i.i.d. phases theta_n.
using DisorderModel = std::variant<FixedDisorder, UniformDisorder, DiscreteDisorder>;

/// theta_0 dresses the initial qubit; theta_t (t >= 1) drives the coin of step t.
struct DisorderRealization {
  std::vector<double> thetas;

  std::size_t steps() const { return thetas.empty() ? 0 : thetas.size() - 1; }
};

struct Qubit {
  cplx alpha{1.0, 0.0};
  cplx beta{0.0, 0.0};

  double norm2() const { return std::norm(alpha) + std::norm(beta); }
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t realization_index = 0;
};

/// Explicit (alpha, beta) or a draw uniform on the unit sphere of C^2.
struct ExplicitInit {
  Qubit q;
};
struct HaarInit {};
using InitMode = std::variant<ExplicitInit, HaarInit>;

/// Independent random streams derived from one SeedSpec.
enum class Stream : std::uint64_t { disorder = 0x64697325ULL, qubit = 0x71756269ULL };

/// Pure function of (seed, stream): the engine for one realization.
std::mt19937_64 make_engine(const SeedSpec& seed, Stream stream);

CoinMatrix make_coin(double theta);
StepOperators split_coin(const CoinMatrix& u);

/// Throws std::invalid_argument on non-finite theta, negative/unnormalized weights or empty support.
void validate(const DisorderModel& model);

DisorderRealization sample_disorder(const DisorderModel& model, std::size_t steps,
                                    const SeedSpec& seed);

/// Returns (alpha e^{i theta0/2}, beta e^{-i theta0/2}) for the chosen or drawn (alpha, beta).
Qubit sample_initial_qubit(const InitMode& mode, double theta0, const SeedSpec& seed);

/// The undressed (alpha, beta) that sample_initial_qubit would use.
Qubit draw_qubit(const InitMode& mode, const SeedSpec& seed);

Qubit dress_qubit(const Qubit& q, double theta0);

/// Max deviation over the four unitarity identities of the coin family.
double unitarity_defect(const CoinMatrix& u);

}  // namespace qdw
