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

#include "homodyne/cli.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "homodyne/direct.hpp"
#include "homodyne/estimators.hpp"
#include "homodyne/kernels.hpp"
#include "homodyne/noise.hpp"
#include "homodyne/sampling.hpp"
#include "homodyne/state.hpp"
#include "homodyne/text.hpp"

namespace homodyne::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kCommands = {"simulate", "estimate", "compare", "sweep"};
const std::set<std::string> kDetectors = {"homodyne", "fixed_phase", "photocount", "heterodyne"};
const std::vector<double> kDefaultNbarGrid = {0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
const std::vector<std::string> kAllObservables = {"intensity", "real_field", "complex_amplitude", "phase"};

const std::set<std::string> kConfigKeys = {
    "command", "state",     "observable", "observables", "eta",       "n",        "seed",
    "output_path", "data_path", "detector", "phi",         "mode",      "nbar_grid", "eta_list", "bins",
};

json read_json_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, std::string("cannot open ") + what + " \"" + path + "\"");
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) fail(ErrorKind::Config, std::string(what) + " \"" + path + "\" is not valid JSON");
    return j;
}

json parse_json_text(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(ErrorKind::Config, std::string(what) + " is not valid JSON: " + text);
    return j;
}

// "a,b,c" or "start:stop:step" (inclusive, values start + k * step).
std::vector<double> parse_grid(const std::string& spec, const char* what) {
    std::vector<double> out;
    try {
        if (spec.find(':') != std::string::npos) {
            const auto parts = text::split(spec, ':');
            if (parts.size() != 3) fail(ErrorKind::Config, std::string(what) + " range must be start:stop:step");
            const double start = text::parse_double(parts[0]);
            const double stop = text::parse_double(parts[1]);
            const double step = text::parse_double(parts[2]);
            if (!(step > 0.0) || !(stop >= start)) {
                fail(ErrorKind::Config, std::string(what) + " range needs step > 0 and stop >= start");
            }
            const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
            for (long long k = 0; k <= count; ++k) out.push_back(start + static_cast<double>(k) * step);
        } else {
            for (auto tok : text::split(spec, ',')) out.push_back(text::parse_double(tok));
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Io) fail(ErrorKind::Config, std::string(what) + ": " + e.what());
        throw;
    }
    return out;
}

json observable_flag(const std::string& value) {
    if (!value.empty() && value.front() == '{') return parse_json_text(value, "--observable");
    return json(value);
}

template <typename T>
T get_field(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(ErrorKind::Config, std::string("config field \"") + key + "\" has the wrong type");
    }
}

std::string compact(const json& j) { return j.dump(); }

void write_output(const RunConfig& config, const std::string& body, std::ostream& out) {
    if (config.output_path.empty()) {
        out << body;
        if (!out) fail(ErrorKind::Io, "failed writing to standard output");
        return;
    }
    std::ofstream file(config.output_path, std::ios::binary | std::ios::trunc);
    if (!file) fail(ErrorKind::Io, "cannot open output \"" + config.output_path + "\"");
    file << body;
    file.flush();
    if (!file) fail(ErrorKind::Io, "failed writing output \"" + config.output_path + "\"");
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Dataset load_dataset(const std::string& path) {
    if (ends_with(path, ".json")) return dataset_from_json(read_json_file(path, "dataset"));
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open dataset \"" + path + "\"");
    return read_dataset_csv(in);
}

void run_simulate(const RunConfig& c, const json& resolved, std::ostream& out) {
    const StateSpec state = state_from_json(c.state);
    std::ostringstream body;
    if (c.detector == "homodyne" || c.detector == "fixed_phase") {
        const Dataset data = c.detector == "homodyne" ? sample_homodyne(state, c.eta, c.n, c.seed)
                                                      : sample_fixed_phase(state, c.eta, c.phi, c.n, c.seed);
        if (ends_with(c.output_path, ".json")) {
            json doc = dataset_to_json(data);
            doc["config"] = resolved;
            body << doc.dump(2) << '\n';
        } else {
            body << "# config=" << compact(resolved) << '\n';
            write_dataset_csv(data, body);
        }
    } else if (c.detector == "photocount") {
        body << "# config=" << compact(resolved) << '\n';
        write_photocount_csv(simulate_photocount(state, c.eta, c.n, c.seed), body);
    } else {
        body << "# config=" << compact(resolved) << '\n';
        write_heterodyne_csv(simulate_heterodyne(state, c.eta, c.n, c.seed), body);
    }
    write_output(c, body.str(), out);
}

void run_estimate(const RunConfig& c, const json& resolved, std::ostream& out) {
    const Dataset data = load_dataset(c.data_path);
    const Observable obs = observable_from_json(c.observable);
    json result;
    if (is_real_valued(obs)) {
        std::size_t degenerate = 0;
        const RunningMoments m = kernel_moments(data, obs, &degenerate);
        Estimate e;
        e.value = m.mean();
        e.n = m.count();
        e.std_error = std::sqrt(m.sample_variance() / static_cast<double>(m.count()));
        result = to_json(e);
        result["kernel_variance"] = m.variance();
        if (std::holds_alternative<Phase>(obs)) result["degenerate"] = degenerate;
    } else {
        result = to_json(estimate_complex(data, obs));
    }
    if (c.bins > 0) {
        if (!std::holds_alternative<Phase>(obs)) fail(ErrorKind::Config, "bins applies to the phase observable only");
        const PhaseHistogram h = phase_kernel_distribution(data, c.bins);
        json centers = json::array(), density = json::array();
        for (std::size_t b = 0; b < h.mass.size(); ++b) {
            centers.push_back(h.bin_center(b));
            density.push_back(h.density(b));
        }
        result["histogram"] = {{"bin_center", centers}, {"density", density}};
    }
    json doc = {
        {"config", resolved},
        {"dataset",
         {{"state", parse_json_text(data.state_tag, "dataset state")}, {"eta", data.eta}, {"seed", data.seed},
          {"n", data.n()}}},
        {"observable", observable_name(obs)},
        {"result", result},
    };
    write_output(c, doc.dump(2) + "\n", out);
}

void run_compare(const RunConfig& c, const json& resolved, std::ostream& out) {
    const StateSpec state = state_from_json(c.state);
    const Observable obs = observable_from_json(c.observable);
    const NoiseComparison cmp = c.mode == "empirical" ? empirical_comparison(obs, state, c.eta, c.n, c.seed)
                                                      : analytic_comparison(obs, state, c.eta);
    const json doc = {{"config", resolved}, {"result", to_json(cmp)}};
    write_output(c, doc.dump(2) + "\n", out);
}

void run_sweep(const RunConfig& c, const json& resolved, std::ostream& out) {
    std::vector<Observable> observables;
    for (const auto& o : c.observables) observables.push_back(observable_from_json(o));
    SweepMode mode;
    mode.empirical = c.mode == "empirical";
    mode.n = c.n;
    mode.seed = c.seed;
    const auto rows = sweep(observables, c.nbar_grid, c.eta_list, mode);
    std::ostringstream body;
    body << "# config=" << compact(resolved) << '\n';
    write_sweep_csv(rows, body);
    write_output(c, body.str(), out);
}

std::string one_line(std::string s) {
    for (char& ch : s) {
        if (ch == '\n' || ch == '\r') ch = ' ';
    }
    return s;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config:
        case ErrorKind::Validation:
        case ErrorKind::Domain:
        case ErrorKind::Argument:
        case ErrorKind::Type: return kExitConfig;
        case ErrorKind::Capability:
        case ErrorKind::AsymptoticDomain: return kExitCapability;
        case ErrorKind::Range:
        case ErrorKind::Order:
        case ErrorKind::Truncation: return kExitRange;
        case ErrorKind::Io: return kExitIo;
    }
    return kExitConfig;
}

json to_json(const RunConfig& c) {
    json j = {{"command", c.command}};
    if (!c.state.is_null()) j["state"] = c.state;
    if (c.command == "sweep") {
        j["observables"] = c.observables;
        j["nbar_grid"] = c.nbar_grid;
        j["eta_list"] = c.eta_list;
        j["mode"] = c.mode;
        j["n"] = c.n;
        j["seed"] = c.seed;
    } else if (c.command == "estimate") {
        j["data_path"] = c.data_path;
        j["observable"] = c.observable;
        j["bins"] = c.bins;
    } else {
        j["eta"] = c.eta;
        j["n"] = c.n;
        j["seed"] = c.seed;
        if (c.command == "compare") j["observable"] = c.observable;
        if (c.command == "simulate") {
            j["detector"] = c.detector;
            if (c.detector == "fixed_phase") j["phi"] = c.phi;
        }
        if (c.command == "compare") j["mode"] = c.mode;
    }
    j["output_path"] = c.output_path;
    return j;
}

RunConfig config_from_json(const json& j) {
    if (!j.is_object()) fail(ErrorKind::Config, "config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!kConfigKeys.count(key)) fail(ErrorKind::Config, "unknown config field \"" + key + "\"");
    }
    RunConfig c;
    if (!j.contains("command")) fail(ErrorKind::Config, "config lacks \"command\"");
    c.command = get_field<std::string>(j, "command");
    if (!kCommands.count(c.command)) fail(ErrorKind::Config, "unknown command \"" + c.command + "\"");

    if (j.contains("eta")) c.eta = get_field<double>(j, "eta");
    if (j.contains("n")) c.n = get_field<std::uint64_t>(j, "n");
    if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, "seed");
    if (j.contains("output_path")) c.output_path = get_field<std::string>(j, "output_path");
    if (j.contains("data_path")) c.data_path = get_field<std::string>(j, "data_path");
    if (j.contains("detector")) c.detector = get_field<std::string>(j, "detector");
    if (j.contains("phi")) c.phi = get_field<double>(j, "phi");
    if (j.contains("mode")) c.mode = get_field<std::string>(j, "mode");
    if (j.contains("bins")) c.bins = get_field<std::size_t>(j, "bins");
    if (j.contains("nbar_grid")) c.nbar_grid = get_field<std::vector<double>>(j, "nbar_grid");
    if (j.contains("eta_list")) c.eta_list = get_field<std::vector<double>>(j, "eta_list");

    if (!kDetectors.count(c.detector)) fail(ErrorKind::Config, "unknown detector \"" + c.detector + "\"");
    if (c.mode != "analytic" && c.mode != "empirical") fail(ErrorKind::Config, "mode must be analytic or empirical");
    if (c.n < 1) fail(ErrorKind::Config, "n must be >= 1");
    check_efficiency(c.eta);

    if (j.contains("state")) {
        c.state = j["state"];
        c.state = to_json(state_from_json(c.state));
    } else if (c.command == "simulate" || c.command == "compare") {
        fail(ErrorKind::Config, c.command + " needs a state (--state, --state-file or config \"state\")");
    }

    c.observable = j.contains("observable") ? j["observable"] : json("intensity");
    c.observable = homodyne::to_json(observable_from_json(c.observable));
    if (j.contains("observables")) {
        const json& list = j["observables"];
        if (list.is_string() && list.get<std::string>() == "all") {
            for (const auto& name : kAllObservables) c.observables.push_back(name);
        } else if (list.is_array()) {
            for (const auto& o : list) c.observables.push_back(homodyne::to_json(observable_from_json(o)));
        } else {
            fail(ErrorKind::Config, "observables must be \"all\" or an array");
        }
    } else {
        for (const auto& name : kAllObservables) c.observables.push_back(name);
    }
    for (auto& o : c.observables) o = homodyne::to_json(observable_from_json(o));

    if (c.command == "sweep") {
        if (c.nbar_grid.empty()) c.nbar_grid = kDefaultNbarGrid;
        if (c.eta_list.empty()) c.eta_list = {1.0};
    }
    if (c.command == "estimate" && c.data_path.empty()) {
        fail(ErrorKind::Config, "estimate needs a dataset (--data or config \"data_path\")");
    }
    return c;
}

void execute(const RunConfig& config, std::ostream& out) {
    const json resolved = to_json(config);
    if (config.command == "simulate") return run_simulate(config, resolved, out);
    if (config.command == "estimate") return run_estimate(config, resolved, out);
    if (config.command == "compare") return run_compare(config, resolved, out);
    return run_sweep(config, resolved, out);
}

namespace {

struct Flags {
    std::string config_path;
    std::optional<std::string> state, state_file, observable, observables, out, data, detector, mode, nbar, etas;
    std::optional<double> eta, phi;
    std::optional<std::uint64_t> n, seed, bins;
};

void add_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config_path, "JSON run config; its values win over flags");
    sub->add_option("--state", f.state, "state JSON, e.g. {\"type\":\"coherent\",\"beta\":[2,0]}");
    sub->add_option("--state-file", f.state_file, "file holding the state JSON");
    sub->add_option("--eta", f.eta, "quantum efficiency in (0, 1]");
    sub->add_option("--n", f.n, "sample count");
    sub->add_option("--seed", f.seed, "64-bit seed");
    sub->add_option("--observable", f.observable, "intensity | real_field | complex_amplitude | phase | JSON");
    sub->add_option("--observables", f.observables, "sweep: comma list of observable names or 'all'");
    sub->add_option("--out", f.out, "output path (default: standard output)");
    sub->add_option("--data", f.data, "estimate: dataset CSV or JSON");
    sub->add_option("--detector", f.detector, "simulate: homodyne | fixed_phase | photocount | heterodyne");
    sub->add_option("--phi", f.phi, "simulate: phase for the fixed_phase detector");
    sub->add_option("--mode", f.mode, "compare/sweep: analytic | empirical");
    sub->add_option("--nbar", f.nbar, "sweep: nbar grid 'a,b,c' or 'start:stop:step'");
    sub->add_option("--etas", f.etas, "sweep: efficiency list 'a,b,c' or 'start:stop:step'");
    sub->add_option("--bins", f.bins, "estimate: phase histogram bins");
}

json flags_to_json(const Flags& f) {
    json j = json::object();
    if (f.state && f.state_file) fail(ErrorKind::Config, "give --state or --state-file, not both");
    if (f.state) j["state"] = parse_json_text(*f.state, "--state");
    if (f.state_file) j["state"] = read_json_file(*f.state_file, "state file");
    if (f.eta) j["eta"] = *f.eta;
    if (f.n) j["n"] = *f.n;
    if (f.seed) j["seed"] = *f.seed;
    if (f.observable) j["observable"] = observable_flag(*f.observable);
    if (f.observables) {
        if (*f.observables == "all") {
            j["observables"] = "all";
        } else {
            json list = json::array();
            for (auto tok : text::split(*f.observables, ',')) list.push_back(std::string(tok));
            j["observables"] = list;
        }
    }
    if (f.out) j["output_path"] = *f.out;
    if (f.data) j["data_path"] = *f.data;
    if (f.detector) j["detector"] = *f.detector;
    if (f.phi) j["phi"] = *f.phi;
    if (f.mode) j["mode"] = *f.mode;
    if (f.nbar) j["nbar_grid"] = parse_grid(*f.nbar, "--nbar");
    if (f.etas) j["eta_list"] = parse_grid(*f.etas, "--etas");
    if (f.bins) j["bins"] = *f.bins;
    return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Homodyne tomography noise toolkit"};
    app.require_subcommand(1);
    Flags flags;
    std::map<std::string, CLI::App*> subs;
    subs["simulate"] = app.add_subcommand("simulate", "generate a homodyne, photocount or heterodyne record");
    subs["estimate"] = app.add_subcommand("estimate", "kernel estimate of an observable from a dataset");
    subs["compare"] = app.add_subcommand("compare", "tomographic vs direct-detection noise");
    subs["sweep"] = app.add_subcommand("sweep", "noise ratio table over nbar and eta grids");
    subs["run"] = app.add_subcommand("run", "execute the command named in --config");
    for (auto& [name, sub] : subs) add_flags(sub, flags);

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return kExitOk;
        } catch (const CLI::ParseError& e) {
            fail(ErrorKind::Config, e.what());
        }
        std::string command;
        for (auto& [name, sub] : subs) {
            if (sub->parsed()) command = name;
        }

        json doc = json::object();
        if (!flags.config_path.empty()) doc = read_json_file(flags.config_path, "config");
        if (!doc.is_object()) fail(ErrorKind::Config, "config must be a JSON object");
        if (command == "run") {
            if (!doc.contains("command")) fail(ErrorKind::Config, "run needs a config with a \"command\" field");
        } else if (doc.contains("command") && doc["command"] != command) {
            err << "warning: config command " << doc["command"].dump() << " overrides subcommand \"" << command
                << "\"\n";
        } else {
            doc["command"] = command;
        }
        const json flag_doc = flags_to_json(flags);
        for (const auto& [key, value] : flag_doc.items()) {
            if (doc.contains(key)) {
                if (doc[key] != value) {
                    err << "warning: config value for \"" << key << "\" overrides the command-line flag\n";
                }
                continue;
            }
            doc[key] = value;
        }
        execute(config_from_json(doc), out);
        return kExitOk;
    } catch (const Error& e) {
        const int code = exit_code_for(e.kind());
        err << "error kind=" << to_string(e.kind()) << " exit=" << code << " message=" << one_line(e.what()) << '\n';
        return code;
    } catch (const std::exception& e) {
        err << "error kind=internal exit=" << kExitConfig << " message=" << one_line(e.what()) << '\n';
        return kExitConfig;
    }
}

}  // namespace homodyne::cli
