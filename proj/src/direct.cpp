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

#include "homodyne/direct.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>

#include "homodyne/errors.hpp"
#include "homodyne/estimators.hpp"
#include "homodyne/parallel.hpp"
#include "homodyne/sampling.hpp"
#include "homodyne/text.hpp"

namespace homodyne {

namespace {

void check_count(std::size_t n) {
    if (n < 1) fail(ErrorKind::Argument, "sample count must be >= 1");
}

void write_header(std::ostream& out, const std::string& tag, double eta, std::uint64_t seed, std::size_t n) {
    out << "# state=" << tag << " eta=" << text::format_double(eta) << " seed=" << seed << " n=" << n << '\n';
}

struct Header {
    std::string state_tag;
    double eta = 1.0;
    std::uint64_t seed = 0;
    std::size_t n = 0;
};

Header parse_header(std::map<std::string, std::string>& meta, const char* what) {
    for (const char* key : {"state", "eta", "seed", "n"}) {
        if (!meta.count(key)) fail(ErrorKind::Io, std::string(what) + " CSV metadata lacks \"" + key + "\"");
    }
    Header h;
    h.state_tag = meta["state"];
    h.eta = text::parse_double(meta["eta"]);
    h.seed = text::parse_u64(meta["seed"]);
    h.n = text::parse_u64(meta["n"]);
    check_efficiency(h.eta);
    return h;
}

std::pair<double, double> eigen_pair(double var_a, double var_b, double cov) {
    const double trace = var_a + var_b;
    const double spread = std::sqrt((var_a - var_b) * (var_a - var_b) + 4.0 * cov * cov);
    return {0.5 * (trace + spread), std::max(0.0, 0.5 * (trace - spread))};
}

}  // namespace

PhotocountRecord simulate_photocount(const StateSpec& state, double eta, std::size_t n, std::uint64_t seed) {
    validate(state);
    check_efficiency(eta);
    check_count(n);
    const PhotonDistribution dist = photon_distribution(state, default_truncation(state));
    const std::vector<double>& p = dist.probabilities;

    PhotocountRecord rec;
    rec.counts.resize(n);
    rec.eta = eta;
    rec.state_tag = describe(state);
    rec.seed = seed;

    const std::size_t blocks = (n + kSampleBlock - 1) / kSampleBlock;
    parallel_for(blocks, [&](std::size_t b) {
        Engine engine = block_engine(seed, Stream::Photocount, b);
        std::discrete_distribution<std::uint64_t> photons(p.begin(), p.end());
        const std::size_t begin = b * kSampleBlock;
        const std::size_t end = std::min(n, begin + kSampleBlock);
        for (std::size_t i = begin; i < end; ++i) {
            const std::uint64_t m = photons(engine);
            if (eta < 1.0 && m > 0) {
                std::binomial_distribution<std::uint64_t> thin(m, eta);
                rec.counts[i] = thin(engine);
            } else {
                rec.counts[i] = m;
            }
        }
    });
    return rec;
}

double intensity_variance_direct(const StateSpec& state, double eta) {
    check_efficiency(eta);
    const double nbar = mean_photon(state);
    const double n2 = support_moment(state, 2, 2).real() + nbar;
    return (n2 - nbar * nbar) + nbar * (1.0 / eta - 1.0);
}

double quadrature_variance(const StateSpec& state) {
    const double nbar = mean_photon(state);
    const double re_a = support_moment(state, 0, 1).real();
    const double re_a2 = support_moment(state, 0, 2).real();
    return 0.5 * re_a2 + 0.5 * nbar + 0.25 - re_a * re_a;
}

double quadrature_variance_direct(const StateSpec& state, double eta) {
    check_efficiency(eta);
    return quadrature_variance(state) + inefficiency_noise_variance(eta);
}

HeterodyneRecord simulate_heterodyne(const StateSpec& state, double eta, std::size_t n, std::uint64_t seed) {
    validate(state);
    check_efficiency(eta);
    check_count(n);
    const auto* coherent = std::get_if<Coherent>(&state);
    if (!coherent) {
        fail(ErrorKind::Capability,
             "heterodyne simulation supports coherent states only; use amplitude_noise_direct for " + describe(state));
    }
    HeterodyneRecord rec;
    rec.alphas.resize(n);
    rec.eta = eta;
    rec.state_tag = describe(state);
    rec.seed = seed;
    const double sd = std::sqrt(0.5 / eta);
    const cdouble beta = coherent->beta;

    const std::size_t blocks = (n + kSampleBlock - 1) / kSampleBlock;
    parallel_for(blocks, [&](std::size_t b) {
        Engine engine = block_engine(seed, Stream::Heterodyne, b);
        std::normal_distribution<double> normal(0.0, sd);
        const std::size_t begin = b * kSampleBlock;
        const std::size_t end = std::min(n, begin + kSampleBlock);
        for (std::size_t i = begin; i < end; ++i) {
            const double re = normal(engine);
            const double im = normal(engine);
            rec.alphas[i] = beta + cdouble(re, im);
        }
    });
    return rec;
}

std::pair<double, double> amplitude_noise_direct(const StateSpec& state, double eta) {
    check_efficiency(eta);
    const double nbar = mean_photon(state);
    const cdouble a = support_moment(state, 0, 1);
    const cdouble a2 = support_moment(state, 0, 2);
    const double base = nbar + 1.0 / eta - std::norm(a);
    const double spread = std::abs(a2 - a * a);
    return {0.5 * (base + spread), 0.5 * (base - spread)};
}

double heterodyne_phase_variance(const HeterodyneRecord& record) {
    if (record.n() == 0) fail(ErrorKind::Argument, "heterodyne record is empty");
    RunningMoments acc;
    for (const cdouble& a : record.alphas) acc.push(std::arg(a));
    return acc.sample_variance();
}

double photocount_intensity_variance(const PhotocountRecord& record) {
    if (record.n() == 0) fail(ErrorKind::Argument, "photocount record is empty");
    RunningMoments acc;
    for (std::uint64_t m : record.counts) acc.push(static_cast<double>(m) / record.eta);
    return acc.sample_variance();
}

std::pair<double, double> heterodyne_noise(const HeterodyneRecord& record) {
    if (record.n() == 0) fail(ErrorKind::Argument, "heterodyne record is empty");
    RunningMoments2 acc;
    for (const cdouble& a : record.alphas) acc.push(a.real(), a.imag());
    return eigen_pair(acc.var_a(), acc.var_b(), acc.cov_ab());
}

void write_photocount_csv(const PhotocountRecord& record, std::ostream& out) {
    write_header(out, record.state_tag, record.eta, record.seed, record.n());
    out << "m\n";
    for (std::uint64_t m : record.counts) out << m << '\n';
    if (!out) fail(ErrorKind::Io, "failed writing photocount CSV");
}

PhotocountRecord read_photocount_csv(std::istream& in) {
    std::map<std::string, std::string> meta;
    const auto rows = text::read_csv(in, "m", meta);
    const Header h = parse_header(meta, "photocount");
    PhotocountRecord rec;
    rec.state_tag = h.state_tag;
    rec.eta = h.eta;
    rec.seed = h.seed;
    rec.counts.reserve(rows.size());
    for (const auto& r : rows) rec.counts.push_back(text::parse_u64(r[0]));
    if (rec.n() != h.n) fail(ErrorKind::Io, "photocount CSV row count does not match n");
    return rec;
}

void write_heterodyne_csv(const HeterodyneRecord& record, std::ostream& out) {
    write_header(out, record.state_tag, record.eta, record.seed, record.n());
    out << "re,im\n";
    for (const cdouble& a : record.alphas) {
        out << text::format_double(a.real()) << ',' << text::format_double(a.imag()) << '\n';
    }
    if (!out) fail(ErrorKind::Io, "failed writing heterodyne CSV");
}

HeterodyneRecord read_heterodyne_csv(std::istream& in) {
    std::map<std::string, std::string> meta;
    const auto rows = text::read_csv(in, "re,im", meta);
    const Header h = parse_header(meta, "heterodyne");
    HeterodyneRecord rec;
    rec.state_tag = h.state_tag;
    rec.eta = h.eta;
    rec.seed = h.seed;
    rec.alphas.reserve(rows.size());
    for (const auto& r : rows) {
        const cdouble a(text::parse_double(r[0]), text::parse_double(r[1]));
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            fail(ErrorKind::Validation, "non-finite heterodyne outcome");
        }
        rec.alphas.push_back(a);
    }
    if (rec.n() != h.n) fail(ErrorKind::Io, "heterodyne CSV row count does not match n");
    return rec;
}

}  // namespace homodyne
