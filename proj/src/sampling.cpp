// Copyright 2026 The Homodyne Noise Authors
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

#include "homodyne/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "homodyne/errors.hpp"
#include "homodyne/parallel.hpp"
#include "homodyne/simd.hpp"
#include "homodyne/text.hpp"

namespace homodyne {

namespace {

constexpr double kGridMassTol = 1e-6;

std::vector<double> grid_nodes(double half_width) {
    std::vector<double> x(kGridNodes);
    const double h = 2.0 * half_width / (kGridNodes - 1);
    for (int j = 0; j < kGridNodes; ++j) x[j] = -half_width + j * h;
    return x;
}

Dataset generate(const StateSpec& state, double eta, std::size_t n, std::uint64_t seed,
                 std::optional<double> fixed_phase) {
    validate(state);
    check_efficiency(eta);
    if (n < 1) fail(ErrorKind::Argument, "sample count must be >= 1");

    Dataset data;
    data.x.resize(n);
    data.phi.resize(n);
    data.eta = eta;
    data.state_tag = describe(state);
    data.seed = seed;
    data.fixed_phase = fixed_phase;

    const auto* coherent = std::get_if<Coherent>(&state);
    std::optional<GridQuadratureSampler> grid;
    if (!coherent) grid.emplace(state);
    const double noise_sd = std::sqrt(inefficiency_noise_variance(eta));
    // Coherent quadratures are Gaussian with variance 1/4; the inefficiency
    // noise is folded into the same draw.
    const double coherent_sd = std::sqrt(kVacuumQuadratureVariance / eta);

    const std::size_t blocks = (n + kSampleBlock - 1) / kSampleBlock;
    parallel_for(blocks, [&](std::size_t b) {
        Engine engine = block_engine(seed, Stream::Homodyne, b);
        std::normal_distribution<double> normal;
        const std::size_t begin = b * kSampleBlock;
        const std::size_t end = std::min(n, begin + kSampleBlock);
        for (std::size_t i = begin; i < end; ++i) {
            double phi = fixed_phase ? *fixed_phase : kPi * uniform01(engine);
            if (!fixed_phase && phi >= kPi) phi = 0.0;
            double x;
            if (coherent) {
                x = (coherent->beta * std::polar(1.0, -phi)).real() + coherent_sd * normal(engine);
            } else {
                x = grid->draw(phi, uniform01(engine));
                if (eta < 1.0) x += noise_sd * normal(engine);
            }
            data.x[i] = x;
            data.phi[i] = phi;
        }
    });
    return data;
}

}  // namespace

void validate(const Dataset& data) {
    if (data.x.size() != data.phi.size()) fail(ErrorKind::Validation, "dataset x and phi lengths differ");
    if (data.x.empty()) fail(ErrorKind::Argument, "dataset is empty");
    check_efficiency(data.eta);
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        if (!std::isfinite(data.x[i])) fail(ErrorKind::Validation, "non-finite quadrature value in dataset");
        const double phi = data.phi[i];
        if (!data.fixed_phase && !(phi >= 0.0 && phi < kPi)) {
            fail(ErrorKind::Validation, "dataset phase outside [0, pi): " + text::format_double(phi));
        }
    }
}

Dataset sample_homodyne(const StateSpec& state, double eta, std::size_t n, std::uint64_t seed) {
    return generate(state, eta, n, seed, std::nullopt);
}

Dataset sample_fixed_phase(const StateSpec& state, double eta, double phi, std::size_t n, std::uint64_t seed) {
    if (!std::isfinite(phi)) fail(ErrorKind::Domain, "fixed phase must be finite");
    return generate(state, eta, n, seed, phi);
}

GridQuadratureSampler::GridQuadratureSampler(const StateSpec& state) {
    validate(state);
    const DensityMatrix rho = to_density_matrix(state, amplitude_truncation(state));
    const int dim = rho.dim();
    half_width_ = 3.0 + 2.0 * std::sqrt(static_cast<double>(dim));
    step_ = 2.0 * half_width_ / (kGridNodes - 1);
    const std::vector<double> xs = grid_nodes(half_width_);

    std::vector<double> psi(static_cast<std::size_t>(dim) * kGridNodes);
    simd::hermite_function_table(dim, xs, psi);
    auto psi_at = [&](int n, int j) { return psi[static_cast<std::size_t>(n) * kGridNodes + j]; };

    // Highest coherence order actually present.
    harmonics_ = 0;
    for (int d = dim - 1; d >= 1 && harmonics_ == 0; --d) {
        for (int n = 0; n + d < dim; ++n) {
            if (rho(n, n + d) != cdouble(0.0)) {
                harmonics_ = d;
                break;
            }
        }
    }

    cumulative_.assign(static_cast<std::size_t>(harmonics_ + 1) * kGridNodes, 0.0);
    std::vector<cdouble> g(kGridNodes);
    for (int d = 0; d <= harmonics_; ++d) {
        std::fill(g.begin(), g.end(), cdouble(0.0));
        for (int n = 0; n + d < dim; ++n) {
            const cdouble c = rho(n, n + d);
            if (c == cdouble(0.0)) continue;
            for (int j = 0; j < kGridNodes; ++j) g[j] += c * psi_at(n, j) * psi_at(n + d, j);
        }
        cdouble* cum = cumulative_.data() + static_cast<std::size_t>(d) * kGridNodes;
        cum[0] = 0.0;
        for (int j = 1; j < kGridNodes; ++j) cum[j] = cum[j - 1] + 0.5 * step_ * (g[j - 1] + g[j]);
    }
    mass_ = cumulative_[kGridNodes - 1].real();
    if (mass_ < 1.0 - kGridMassTol) {
        std::ostringstream os;
        os << "quadrature grid [-" << half_width_ << ", " << half_width_ << "] holds probability " << mass_
           << " < 1 - 1e-6; the state needs a wider extent than 3 + 2 sqrt(dim)";
        fail(ErrorKind::Range, os.str());
    }
}

double GridQuadratureSampler::cdf_at(std::size_t node, const std::vector<cdouble>& phases) const {
    double c = cumulative_[node].real();
    for (int d = 1; d <= harmonics_; ++d) {
        c += 2.0 * (phases[d] * cumulative_[static_cast<std::size_t>(d) * kGridNodes + node]).real();
    }
    return c;
}

double GridQuadratureSampler::draw(double phi, double u) const {
    std::vector<cdouble> phases(static_cast<std::size_t>(harmonics_ + 1));
    phases[0] = 1.0;
    if (harmonics_ > 0) {
        const cdouble step = std::polar(1.0, phi);
        for (int d = 1; d <= harmonics_; ++d) phases[d] = phases[d - 1] * step;
    }
    const double total = cdf_at(kGridNodes - 1, phases);
    const double target = u * total;
    // first node with cdf >= target
    std::size_t lo = 0, hi = kGridNodes - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (cdf_at(mid, phases) < target) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if (lo == 0) return -half_width_;
    const double c_hi = cdf_at(lo, phases);
    const double c_lo = cdf_at(lo - 1, phases);
    const double t = c_hi > c_lo ? std::clamp((target - c_lo) / (c_hi - c_lo), 0.0, 1.0) : 0.5;
    return -half_width_ + (static_cast<double>(lo - 1) + t) * step_;
}

void write_dataset_csv(const Dataset& data, std::ostream& out) {
    out << "# state=" << data.state_tag << " eta=" << text::format_double(data.eta) << " seed=" << data.seed
        << " n=" << data.n() << '\n';
    if (data.fixed_phase) out << "# fixed_phase=" << text::format_double(*data.fixed_phase) << '\n';
    out << "x,phi\n";
    for (std::size_t i = 0; i < data.n(); ++i) {
        out << text::format_double(data.x[i]) << ',' << text::format_double(data.phi[i]) << '\n';
    }
    if (!out) fail(ErrorKind::Io, "failed writing dataset CSV");
}

Dataset read_dataset_csv(std::istream& in) {
    std::map<std::string, std::string> meta;
    const auto rows = text::read_csv(in, "x,phi", meta);
    Dataset data;
    for (const char* key : {"state", "eta", "seed", "n"}) {
        if (!meta.count(key)) fail(ErrorKind::Io, std::string("dataset CSV metadata lacks \"") + key + "\"");
    }
    data.state_tag = meta["state"];
    data.eta = text::parse_double(meta["eta"]);
    data.seed = text::parse_u64(meta["seed"]);
    if (meta.count("fixed_phase")) data.fixed_phase = text::parse_double(meta["fixed_phase"]);
    data.x.reserve(rows.size());
    data.phi.reserve(rows.size());
    for (const auto& r : rows) {
        data.x.push_back(text::parse_double(r[0]));
        data.phi.push_back(text::parse_double(r[1]));
    }
    if (text::parse_u64(meta["n"]) != data.n()) fail(ErrorKind::Io, "dataset CSV row count does not match n");
    validate(data);
    return data;
}

nlohmann::json dataset_to_json(const Dataset& data) {
    nlohmann::json samples = nlohmann::json::array();
    for (std::size_t i = 0; i < data.n(); ++i) samples.push_back({data.x[i], data.phi[i]});
    nlohmann::json j = {
        {"state", nlohmann::json::parse(data.state_tag, nullptr, false)},
        {"eta", data.eta},
        {"seed", data.seed},
        {"n", data.n()},
        {"samples", samples},
    };
    if (j["state"].is_discarded()) j["state"] = data.state_tag;
    if (data.fixed_phase) j["fixed_phase"] = *data.fixed_phase;
    return j;
}

Dataset dataset_from_json(const nlohmann::json& j) {
    try {
        Dataset data;
        data.state_tag = j.at("state").is_string() ? j.at("state").get<std::string>() : j.at("state").dump();
        data.eta = j.at("eta").get<double>();
        data.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("fixed_phase")) data.fixed_phase = j["fixed_phase"].get<double>();
        for (const auto& s : j.at("samples")) {
            data.x.push_back(s.at(0).get<double>());
            data.phi.push_back(s.at(1).get<double>());
        }
        if (j.at("n").get<std::size_t>() != data.n()) fail(ErrorKind::Io, "dataset JSON sample count does not match n");
        validate(data);
        return data;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Io, std::string("malformed dataset JSON: ") + e.what());
    }
}

}  // namespace homodyne
