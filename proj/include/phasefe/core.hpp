// Copyright 2026 The phasefe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

/// @file core.hpp
/// @brief Error types, qubit/bit ordering helpers and seeded RNG streams.

namespace phasefe {

/// Raised for inconsistent qubit counts or vector lengths.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when a parameter is outside its valid domain.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when a request exceeds a module size cap. Carries a cost estimate.
struct CapExceeded : std::runtime_error {
    double estimated_cost;
    CapExceeded(const std::string &what, double cost) : std::runtime_error(what), estimated_cost(cost) {}
};

/// Raised when a numerical self-check (normalization, drift) fails.
struct NumericalHealthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Word = std::uint64_t;
using Rng = std::mt19937_64;

inline constexpr int kMaxWordQubits = 32;

/// Bit of qubit q (0-based) in a 2^n index. Qubit 0 is the most significant bit.
inline constexpr Word qubit_bit(int n, int q) {
    return Word{1} << (n - 1 - q);
}

inline constexpr Word low_mask(int n) {
    return n >= 64 ? ~Word{0} : (Word{1} << n) - 1;
}

inline int popcount(Word w) {
    return std::popcount(w);
}

inline int parity(Word w) {
    return std::popcount(w) & 1;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Independent stream `stream` of master seed `seed`.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL)));
}

/// Uniform double in [0, 1) with 53 random bits; platform independent.
inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on uniform01 (portable across standard libraries).
inline double standard_normal(Rng &rng) {
    double u1 = 1.0 - uniform01(rng);
    double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

/// Exponential(1) variate.
inline double standard_exponential(Rng &rng) {
    return -std::log(1.0 - uniform01(rng));
}

/// Uniform integer in [0, bound).
inline std::uint64_t uniform_index(Rng &rng, std::uint64_t bound) {
    if (bound == 0) {
        throw DomainError("uniform_index: empty range");
    }
    // Rejection sampling keeps the draw exactly uniform.
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % bound;
}

inline void check_qubits(int n, int cap, const char *what) {
    if (n < 1) {
        throw DomainError(std::string(what) + ": qubit count must be >= 1");
    }
    if (n > cap) {
        throw CapExceeded(std::string(what) + ": n=" + std::to_string(n) + " exceeds cap " + std::to_string(cap),
                          static_cast<double>(n));
    }
}

}  // namespace phasefe
