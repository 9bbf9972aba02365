/*
 * Copyright 2026 The altref Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "altref/systems.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace altref {

struct RandomSpec {
    int n_states = 1;
    int n_actions1 = 1;
    int n_actions2 = 1;
    int n_obs = 1;
    double fair_density = 0.0;
    std::uint64_t seed = 0;
};

inline void check_spec(const RandomSpec& spec)
{
    if (spec.n_states < 1 || spec.n_actions1 < 1 || spec.n_actions2 < 1 || spec.n_obs < 1)
        throw std::invalid_argument("random spec counts must be at least 1");
    if (!(spec.fair_density >= 0.0 && spec.fair_density <= 1.0))
        throw std::invalid_argument("fair density must lie in [0,1]");
}

/// Deterministic stream derived from a seed. Stream 0 draws the structure,
/// stream 1 the fair set, so changing the density leaves the structure
/// untouched. Bounded draws use rejection sampling to stay identical across
/// standard libraries.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream) : eng_(splitmix64(seed ^ splitmix64(stream + 1))) {}

    std::uint64_t bits() { return eng_(); }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % bound;
    }
    int below(int bound) { return static_cast<int>(below(static_cast<std::uint64_t>(bound))); }

    /// True with probability p (53-bit resolution).
    bool bernoulli(double p) { return static_cast<double>(eng_() >> 11) * 0x1.0p-53 < p; }

    /// Uniform non-empty subset of 0..n-1, ascending.
    std::vector<int> nonempty_subset(int n)
    {
        std::vector<int> out;
        do {
            out.clear();
            for (int i = 0; i < n; ++i)
                if (eng_() >> 63) out.push_back(i);
        } while (out.empty());
        return out;
    }

    static std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

private:
    std::mt19937_64 eng_;
};

inline Ats random_ats(const RandomSpec& spec)
{
    check_spec(spec);
    RandomStream rng(spec.seed, 0);
    Ats k = Ats::with_shape(spec.n_states, spec.n_actions1, spec.n_actions2, spec.n_obs);
    for (int w = 0; w < spec.n_states; ++w) {
        k.label[w] = rng.below(spec.n_obs);
        k.enabled1[w] = rng.nonempty_subset(spec.n_actions1);
        k.enabled2[w] = rng.nonempty_subset(spec.n_actions2);
        for (int a : k.enabled1[w])
            for (int b : k.enabled2[w]) k.delta[k.cell(w, a, b)] = rng.below(spec.n_states);
    }
    return k;
}

/// Transition system with uniformly drawn non-empty successor sets.
inline Ts random_ts(const RandomSpec& spec)
{
    check_spec(spec);
    RandomStream rng(spec.seed, 0);
    Ts t;
    for (int i = 0; i < spec.n_obs; ++i) t.obs.push_back("o" + std::to_string(i));
    for (int i = 0; i < spec.n_states; ++i) t.states.push_back("s" + std::to_string(i));
    t.label.resize(spec.n_states);
    t.succ.resize(spec.n_states);
    for (int w = 0; w < spec.n_states; ++w) {
        t.label[w] = rng.below(spec.n_obs);
        t.succ[w] = rng.nonempty_subset(spec.n_states);
    }
    return t;
}

inline std::vector<int> random_fair_set(const RandomSpec& spec)
{
    check_spec(spec);
    RandomStream rng(spec.seed, 1);
    std::vector<int> fair;
    for (int w = 0; w < spec.n_states; ++w)
        if (rng.bernoulli(spec.fair_density)) fair.push_back(w);
    return fair;
}

/// Random system as written by the generator: plain when the density is 0,
/// fair otherwise.
inline System random_system(const RandomSpec& spec, bool transition_system)
{
    if (transition_system) {
        Ts t = random_ts(spec);
        if (spec.fair_density == 0.0) return t;
        return FairTs{std::move(t), random_fair_set(spec)};
    }
    Ats k = random_ats(spec);
    if (spec.fair_density == 0.0) return k;
    return FairAts{std::move(k), random_fair_set(spec)};
}

} // namespace altref
