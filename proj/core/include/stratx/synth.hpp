#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "stratx/dataset.hpp"

namespace stratx {

enum class SynthKind { interaction, noisy_quadratic, weather, bodyweight };

SynthKind parse_synth_kind(const std::string& name); // throws DataError on unknown name
std::string to_string(SynthKind kind);

// Noiseless response surfaces, exposed so tests can derive expected
// values from the same formulas the generators use.
double interaction_response(double x1, double x2);
double quadratic_response(double x1, double x2);
double weather_base(std::size_t state_code); // codes are alphabetical: AZ CA CO NV WA
double weather_response(std::size_t state_code, double day_of_year);
double bodyweight_response(double height, double min_height, double pregnant, double education);

// x1, x2, x3 ~ U(0, 10); y = x1^2 + x1*x2 + 5*x1*sin(3*x2) + 10.
// x3 never enters the response.
Dataset gen_interaction(std::size_t n, std::uint64_t seed);

// x1, x2 ~ U(-2, 2); y = x1^2 + x2 + 10 + N(0, sigma).
Dataset gen_noisy_quadratic(std::size_t n, double sigma, std::uint64_t seed);

// Categorical state (AZ/CA/CO/NV/WA, base temps 90/70/40/80/60) and
// dayofyear 1..365; temp = base + 10*sin(2*pi/365*day + pi) + N(0, sigma).
// Emits n_per_state_day rows for every (state, day) pair. sigma defaults
// to the survey value 4; 0 gives the noiseless surface.
Dataset gen_weather(std::size_t n_per_state_day, std::uint64_t seed, double sigma = 4.0);

// sex ~ Bernoulli(1/2); pregnant ~ Bernoulli(1/2) for women, 0 for men;
// height ~ 65 + U(-4.5, 5) (F) or 68 + U(-7, 8) (M); education ~
// 12 + U(0, 8) (F) or 10 + U(0, 8) (M);
// weight = 120 + 10*(height - min height in sample) + 40*pregnant
//          - 1.5*education.
// sex and pregnant are categorical. Each column draws from its own
// seeded stream, so adding a column never perturbs the others.
Dataset gen_bodyweight(std::size_t n, std::uint64_t seed);

} // namespace stratx
