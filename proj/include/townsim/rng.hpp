#pragma once

#include <cstdint>
#include <random>

namespace townsim {

/// Seeded 64-bit Mersenne Twister with hand-rolled variate helpers.
///
/// The standard <random> distributions are implementation-defined, so every
/// variate used by the simulator is derived here from raw engine output. Given
/// the same seed the sequence is identical on every conforming platform.
class Rng {
public:
    using result_type = std::mt19937_64::result_type;

    explicit Rng(std::uint64_t seed = 1) : engine_(seed) {}

    /// Independent stream for one consumer (module) of a run.
    Rng(std::uint64_t seed, std::uint64_t stream);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// True with probability p. p <= 0 never fires, p >= 1 always does.
    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// Standard normal deviate (Marsaglia polar method).
    double normal();

    // UniformRandomBitGenerator, so std::shuffle etc. accept it.
    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Stream identifiers used to split one scenario seed across modules.
enum class Stream : std::uint64_t {
    Network = 1,
    Seeding = 2,
    Transmission = 3,
    Travel = 4,
    Willingness = 5,
    Vaccination = 6,
};

inline Rng make_stream(std::uint64_t seed, Stream s) {
    return Rng(seed, static_cast<std::uint64_t>(s));
}

}  // namespace townsim
