#include "stratx/synth.hpp"

#include <algorithm>
#include <cmath>

#include "stratx/errors.hpp"
#include "stratx/rng.hpp"

namespace stratx {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Fixed per-column stream salts; one Rng per column keeps columns
// independent of each other and of row-generation order.
enum : std::uint64_t {
    kInterX1 = 101,
    kInterX2 = 102,
    kInterX3 = 103,
    kQuadX1 = 201,
    kQuadX2 = 202,
    kQuadNoise = 203,
    kWeatherNoise = 301,
    kBodySex = 401,
    kBodyPregnant = 402,
    kBodyHeight = 403,
    kBodyEducation = 404,
};

Rng column_stream(std::uint64_t seed, std::uint64_t salt) { return Rng(mix_seed(seed, salt)); }

} // namespace

SynthKind parse_synth_kind(const std::string& name) {
    if (name == "interaction") return SynthKind::interaction;
    if (name == "noisy_quadratic") return SynthKind::noisy_quadratic;
    if (name == "weather") return SynthKind::weather;
    if (name == "bodyweight") return SynthKind::bodyweight;
    throw DataError("unknown synthetic dataset '" + name +
                    "' (expected interaction, noisy_quadratic, weather, or bodyweight)");
}

std::string to_string(SynthKind kind) {
    switch (kind) {
    case SynthKind::interaction: return "interaction";
    case SynthKind::noisy_quadratic: return "noisy_quadratic";
    case SynthKind::weather: return "weather";
    case SynthKind::bodyweight: return "bodyweight";
    }
    return "?";
}

double interaction_response(double x1, double x2) {
    return x1 * x1 + x1 * x2 + 5.0 * x1 * std::sin(3.0 * x2) + 10.0;
}

double quadratic_response(double x1, double x2) { return x1 * x1 + x2 + 10.0; }

double weather_base(std::size_t state_code) {
    static constexpr double kBase[5] = {90.0, 70.0, 40.0, 80.0, 60.0}; // AZ CA CO NV WA
    return kBase[state_code];
}

double weather_response(std::size_t state_code, double day_of_year) {
    return weather_base(state_code) + 10.0 * std::sin(2.0 * kPi / 365.0 * day_of_year + kPi);
}

double bodyweight_response(double height, double min_height, double pregnant, double education) {
    return 120.0 + 10.0 * (height - min_height) + 40.0 * pregnant - 1.5 * education;
}

Dataset gen_interaction(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw DataError("gen_interaction: n must be at least 1");
    Rng r1 = column_stream(seed, kInterX1);
    Rng r2 = column_stream(seed, kInterX2);
    Rng r3 = column_stream(seed, kInterX3);
    std::vector<double> x1(n), x2(n), x3(n), y(n);
    for (std::size_t i = 0; i < n; ++i) x1[i] = r1.uniform(0.0, 10.0);
    for (std::size_t i = 0; i < n; ++i) x2[i] = r2.uniform(0.0, 10.0);
    for (std::size_t i = 0; i < n; ++i) x3[i] = r3.uniform(0.0, 10.0);
    for (std::size_t i = 0; i < n; ++i) y[i] = interaction_response(x1[i], x2[i]);

    std::vector<ColMeta> meta{{"x1", ColKind::numeric, {}},
                              {"x2", ColKind::numeric, {}},
                              {"x3", ColKind::numeric, {}}};
    return Dataset(std::move(meta), {std::move(x1), std::move(x2), std::move(x3)}, std::move(y),
                   "y");
}

Dataset gen_noisy_quadratic(std::size_t n, double sigma, std::uint64_t seed) {
    if (n < 1) throw DataError("gen_noisy_quadratic: n must be at least 1");
    if (!(sigma >= 0.0)) throw DataError("gen_noisy_quadratic: sigma must be non-negative");
    Rng r1 = column_stream(seed, kQuadX1);
    Rng r2 = column_stream(seed, kQuadX2);
    Rng re = column_stream(seed, kQuadNoise);
    std::vector<double> x1(n), x2(n), y(n);
    for (std::size_t i = 0; i < n; ++i) x1[i] = r1.uniform(-2.0, 2.0);
    for (std::size_t i = 0; i < n; ++i) x2[i] = r2.uniform(-2.0, 2.0);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = quadratic_response(x1[i], x2[i]) + re.normal(0.0, sigma);
    }

    std::vector<ColMeta> meta{{"x1", ColKind::numeric, {}}, {"x2", ColKind::numeric, {}}};
    return Dataset(std::move(meta), {std::move(x1), std::move(x2)}, std::move(y), "y");
}

Dataset gen_weather(std::size_t n_per_state_day, std::uint64_t seed, double sigma) {
    if (n_per_state_day < 1) throw DataError("gen_weather: count must be at least 1");
    if (!(sigma >= 0.0)) throw DataError("gen_weather: sigma must be non-negative");
    const std::size_t n = n_per_state_day * 5 * 365;
    Rng re = column_stream(seed, kWeatherNoise);
    std::vector<double> state(n), day(n), y(n);
    std::size_t i = 0;
    for (std::size_t rep = 0; rep < n_per_state_day; ++rep) {
        for (std::size_t s = 0; s < 5; ++s) {
            for (std::size_t d = 1; d <= 365; ++d) {
                state[i] = static_cast<double>(s);
                day[i] = static_cast<double>(d);
                y[i] = weather_response(s, static_cast<double>(d)) + re.normal(0.0, sigma);
                ++i;
            }
        }
    }

    std::vector<ColMeta> meta{{"state", ColKind::categorical, {"AZ", "CA", "CO", "NV", "WA"}},
                              {"dayofyear", ColKind::numeric, {}}};
    return Dataset(std::move(meta), {std::move(state), std::move(day)}, std::move(y), "temp");
}

Dataset gen_bodyweight(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw DataError("gen_bodyweight: n must be at least 1");
    Rng rsex = column_stream(seed, kBodySex);
    Rng rpreg = column_stream(seed, kBodyPregnant);
    Rng rheight = column_stream(seed, kBodyHeight);
    Rng redu = column_stream(seed, kBodyEducation);

    std::vector<double> sex(n), pregnant(n), height(n), education(n), y(n);
    for (std::size_t i = 0; i < n; ++i) sex[i] = rsex.bernoulli(0.5) ? 0.0 : 1.0; // F=0, M=1
    for (std::size_t i = 0; i < n; ++i) {
        // Draw unconditionally so the stream is row-aligned; men are
        // never pregnant regardless of the draw.
        const bool drawn = rpreg.bernoulli(0.5);
        pregnant[i] = (sex[i] == 0.0 && drawn) ? 1.0 : 0.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rheight.uniform();
        height[i] = sex[i] == 0.0 ? 65.0 + (-4.5 + u * 9.5) : 68.0 + (-7.0 + u * 15.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        education[i] = (sex[i] == 0.0 ? 12.0 : 10.0) + redu.uniform(0.0, 8.0);
    }
    const double min_height = *std::min_element(height.begin(), height.end());
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = bodyweight_response(height[i], min_height, pregnant[i], education[i]);
    }

    std::vector<ColMeta> meta{{"sex", ColKind::categorical, {"F", "M"}},
                              {"pregnant", ColKind::categorical, {"0", "1"}},
                              {"height", ColKind::numeric, {}},
                              {"education", ColKind::numeric, {}}};
    return Dataset(std::move(meta),
                   {std::move(sex), std::move(pregnant), std::move(height), std::move(education)},
                   std::move(y), "weight");
}

} // namespace stratx
