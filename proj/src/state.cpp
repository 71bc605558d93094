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

#include "homodyne/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "homodyne/errors.hpp"
#include "homodyne/quadrature_density.hpp"

namespace homodyne {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-10;
constexpr double kDiagonalFloor = -1e-12;
constexpr double kEigenFloor = -1e-10;
constexpr int kMaxFockLevel = 100000;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// k! / (k - j)!
double falling_factorial(int k, int j) {
    double r = 1.0;
    for (int i = 0; i < j; ++i) r *= static_cast<double>(k - i);
    return r;
}

void validate_matrix(const DensityMatrix& rho, PositivityCheck check) {
    const int d = rho.dim();
    if (d < 1) fail(ErrorKind::Validation, "mixed state needs dim >= 1");
    double worst = 0.0;
    cdouble trace = 0.0;
    for (int i = 0; i < d; ++i) {
        trace += rho(i, i);
        if (rho(i, i).real() < kDiagonalFloor) {
            fail(ErrorKind::Validation, "negative diagonal entry rho(" + std::to_string(i) + "," +
                                            std::to_string(i) + ")");
        }
        for (int j = 0; j < d; ++j) {
            const cdouble a = rho(i, j);
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                fail(ErrorKind::Validation, "non-finite density matrix entry");
            }
            worst = std::max(worst, std::abs(a - std::conj(rho(j, i))));
        }
    }
    if (worst > kHermitianTol) {
        std::ostringstream os;
        os << "density matrix is not Hermitian (max deviation " << worst << ")";
        fail(ErrorKind::Validation, os.str());
    }
    if (std::abs(trace - 1.0) > kTraceTol) {
        std::ostringstream os;
        os << "density matrix trace " << trace.real() << " differs from 1";
        fail(ErrorKind::Validation, os.str());
    }
    if (check == PositivityCheck::Strict) {
        Eigen::MatrixXcd m(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m(i, j) = rho(i, j);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
        const double smallest = solver.eigenvalues().minCoeff();
        if (smallest < kEigenFloor) {
            std::ostringstream os;
            os << "density matrix is not positive semidefinite (eigenvalue " << smallest << ")";
            fail(ErrorKind::Validation, os.str());
        }
    }
}

}  // namespace

double inefficiency_noise_variance(double eta) {
    check_efficiency(eta);
    return (1.0 - eta) / (4.0 * eta);
}

void check_efficiency(double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        std::ostringstream os;
        os << "quantum efficiency must lie in (0, 1], got " << eta;
        fail(ErrorKind::Domain, os.str());
    }
}

DensityMatrix::DensityMatrix(int dim, std::vector<cdouble> entries) : dim_(dim), entries_(std::move(entries)) {
    if (dim < 1) fail(ErrorKind::Validation, "density matrix dimension must be >= 1");
    if (entries_.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {
        fail(ErrorKind::Validation, "density matrix needs dim*dim entries");
    }
}

void validate(const StateSpec& state, PositivityCheck check) {
    std::visit(overloaded{
                   [](const Coherent& c) {
                       if (!std::isfinite(c.beta.real()) || !std::isfinite(c.beta.imag()))
                           fail(ErrorKind::Validation, "coherent amplitude must be finite");
                   },
                   [](const Fock& f) {
                       if (f.n < 0 || f.n > kMaxFockLevel)
                           fail(ErrorKind::Validation, "Fock level out of range: " + std::to_string(f.n));
                   },
                   [check](const Mixed& m) { validate_matrix(m.rho, check); },
               },
               state);
}

Mixed make_mixed(DensityMatrix rho, PositivityCheck check) {
    validate_matrix(rho, check);
    return Mixed{std::move(rho)};
}

int default_truncation(const StateSpec& state) {
    return std::visit(overloaded{
                          [](const Coherent& c) {
                              const double r = std::abs(c.beta);
                              return std::max(20, static_cast<int>(std::ceil(r * r + 8.0 * r + 10.0)));
                          },
                          [](const Fock& f) { return f.n + 1; },
                          [](const Mixed& m) { return m.rho.dim(); },
                      },
                      state);
}

int amplitude_truncation(const StateSpec& state) {
    if (const auto* c = std::get_if<Coherent>(&state)) {
        const double r = std::abs(c->beta);
        return std::max(default_truncation(state), static_cast<int>(std::ceil(r * r + 12.0 * r + 20.0)));
    }
    return default_truncation(state);
}

PhotonDistribution photon_distribution(const StateSpec& state, int dim) {
    if (dim < 1) fail(ErrorKind::Argument, "photon_distribution needs dim >= 1");
    validate(state);
    PhotonDistribution out;
    out.probabilities.assign(static_cast<std::size_t>(dim), 0.0);
    std::visit(overloaded{
                   [&](const Coherent& c) {
                       const double nbar = std::norm(c.beta);
                       if (nbar == 0.0) {
                           out.probabilities[0] = 1.0;
                           return;
                       }
                       const double log_nbar = std::log(nbar);
                       for (int k = 0; k < dim; ++k) {
                           out.probabilities[k] = std::exp(-nbar + k * log_nbar - std::lgamma(k + 1.0));
                       }
                   },
                   [&](const Fock& f) {
                       if (f.n < dim) out.probabilities[f.n] = 1.0;
                   },
                   [&](const Mixed& m) {
                       const int d = std::min(dim, m.rho.dim());
                       for (int k = 0; k < d; ++k) out.probabilities[k] = std::max(0.0, m.rho(k, k).real());
                   },
               },
               state);
    double sum = 0.0;
    for (double p : out.probabilities) sum += p;
    out.tail_mass = std::max(0.0, 1.0 - sum);
    return out;
}

cdouble support_moment(const StateSpec& state, int n, int m) {
    if (n < 0 || m < 0) fail(ErrorKind::Argument, "moment orders must be nonnegative");
    validate(state);
    return std::visit(
        overloaded{
            [&](const Coherent& c) { return std::pow(std::conj(c.beta), n) * std::pow(c.beta, m); },
            [&](const Fock& f) -> cdouble {
                if (n != m || n > f.n) return 0.0;
                return falling_factorial(f.n, n);
            },
            [&](const Mixed& mx) -> cdouble {
                const int d = mx.rho.dim();
                // a^dag^n a^m |j> = sqrt(j!/(j-m)!) sqrt((j-m+n)!/(j-m)!) |j-m+n>
                cdouble acc = 0.0;
                for (int j = m; j < d; ++j) {
                    const int k = j - m + n;
                    if (k >= d) break;
                    const double coef = std::sqrt(falling_factorial(j, m) * falling_factorial(k, n));
                    acc += mx.rho(j, k) * coef;
                }
                return acc;
            },
        },
        state);
}

cdouble normal_moment(const StateSpec& state, int n, int m) {
    if (const auto* mx = std::get_if<Mixed>(&state)) {
        const int d = mx->rho.dim();
        if (n >= 0 && m >= 0 && n + m >= d) {
            fail(ErrorKind::Truncation, "moment order n+m=" + std::to_string(n + m) +
                                            " not representable with dim=" + std::to_string(d));
        }
    }
    return support_moment(state, n, m);
}

double mean_photon(const StateSpec& state) { return std::max(0.0, support_moment(state, 1, 1).real()); }

void hermite_functions(double x, std::span<double> out) {
    if (out.empty()) return;
    // psi_n(x) = (2/pi)^{1/4} H_n(sqrt(2) x) exp(-x^2) / sqrt(2^n n!)
    const double y = std::sqrt(2.0) * x;
    out[0] = std::pow(2.0 / kPi, 0.25) * std::exp(-x * x);
    if (out.size() == 1) return;
    out[1] = std::sqrt(2.0) * y * out[0];
    for (std::size_t k = 1; k + 1 < out.size(); ++k) {
        const double kk = static_cast<double>(k);
        out[k + 1] = std::sqrt(2.0 / (kk + 1.0)) * y * out[k] - std::sqrt(kk / (kk + 1.0)) * out[k - 1];
    }
}

double quadrature_pdf(const StateSpec& state, double phi, double eta, double x) {
    check_efficiency(eta);
    return QuadratureDensity(state, phi)(x, eta);
}

std::vector<cdouble> coherent_amplitudes(cdouble beta, int dim) {
    std::vector<cdouble> c(static_cast<std::size_t>(std::max(dim, 0)));
    if (c.empty()) return c;
    c[0] = std::exp(-0.5 * std::norm(beta));
    for (int k = 1; k < dim; ++k) c[k] = c[k - 1] * beta / std::sqrt(static_cast<double>(k));
    return c;
}

DensityMatrix to_density_matrix(const StateSpec& state, int dim) {
    if (dim < 1) fail(ErrorKind::Argument, "to_density_matrix needs dim >= 1");
    std::vector<cdouble> e(static_cast<std::size_t>(dim) * dim, 0.0);
    std::visit(overloaded{
                   [&](const Coherent& c) {
                       const auto amp = coherent_amplitudes(c.beta, dim);
                       for (int i = 0; i < dim; ++i)
                           for (int j = 0; j < dim; ++j) e[i * dim + j] = amp[i] * std::conj(amp[j]);
                   },
                   [&](const Fock& f) {
                       if (f.n < dim) e[f.n * dim + f.n] = 1.0;
                   },
                   [&](const Mixed& m) {
                       const int d = std::min(dim, m.rho.dim());
                       for (int i = 0; i < d; ++i)
                           for (int j = 0; j < d; ++j) e[i * dim + j] = m.rho(i, j);
                   },
               },
               state);
    return DensityMatrix(dim, std::move(e));
}

std::string describe(const StateSpec& state) { return to_json(state).dump(); }

nlohmann::json to_json(const StateSpec& state) {
    return std::visit(overloaded{
                          [](const Coherent& c) {
                              return nlohmann::json{{"type", "coherent"}, {"beta", {c.beta.real(), c.beta.imag()}}};
                          },
                          [](const Fock& f) { return nlohmann::json{{"type", "fock"}, {"n", f.n}}; },
                          [](const Mixed& m) {
                              nlohmann::json rho = nlohmann::json::array();
                              for (const cdouble& v : m.rho.entries()) rho.push_back({v.real(), v.imag()});
                              return nlohmann::json{{"type", "mixed"}, {"dim", m.rho.dim()}, {"rho", rho}};
                          },
                      },
                      state);
}

namespace {

cdouble complex_from_json(const nlohmann::json& j, const char* what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        fail(ErrorKind::Config, std::string(what) + " must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

StateSpec state_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        fail(ErrorKind::Config, "state must be an object with a string \"type\"");
    }
    const std::string type = j["type"].get<std::string>();
    StateSpec state;
    if (type == "coherent") {
        if (!j.contains("beta")) fail(ErrorKind::Config, "coherent state needs \"beta\"");
        state = Coherent{complex_from_json(j["beta"], "beta")};
    } else if (type == "fock") {
        if (!j.contains("n") || !j["n"].is_number_integer()) fail(ErrorKind::Config, "fock state needs integer \"n\"");
        state = Fock{j["n"].get<int>()};
    } else if (type == "mixed") {
        if (!j.contains("dim") || !j["dim"].is_number_integer()) fail(ErrorKind::Config, "mixed state needs integer \"dim\"");
        if (!j.contains("rho") || !j["rho"].is_array()) fail(ErrorKind::Config, "mixed state needs array \"rho\"");
        const int dim = j["rho"].size() == 0 ? 0 : j["dim"].get<int>();
        if (dim < 1) fail(ErrorKind::Config, "mixed state needs dim >= 1");
        const auto& rho = j["rho"];
        if (rho.size() != static_cast<std::size_t>(dim) * dim) {
            fail(ErrorKind::Config, "\"rho\" must hold dim*dim row-major entries");
        }
        std::vector<cdouble> entries;
        entries.reserve(rho.size());
        for (const auto& v : rho) entries.push_back(complex_from_json(v, "rho entry"));
        state = Mixed{DensityMatrix(dim, std::move(entries))};
    } else {
        fail(ErrorKind::Config, "unknown state type \"" + type + "\"");
    }
    validate(state);
    return state;
}

}  // namespace homodyne
