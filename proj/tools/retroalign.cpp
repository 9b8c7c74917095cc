#include "retroalign/dof/dof.hpp"
#include "retroalign/schemes/engine.hpp"
#include "retroalign/sim/trace.hpp"
#include "retroalign/verify/acceptance.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

using namespace retroalign;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string model;
    int K = 0;
    int M = 0;
    std::string k_range;
    std::uint64_t seed = 1;
    int trials = 100;
    std::string field = "prime";
    bool strict = true;
    std::string format = "csv";
    std::string out;
    std::vector<std::string> models;
    std::vector<int> m_list;
    bool per_w = false;
    std::string scope = "all";
    bool inject_fault = false;
    std::string trace;
};

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + csv_cell(cells[i]);
    return line + "\n";
}

ModelId model_of(const std::string& tag) {
    auto m = parse_model(tag);
    if (!m) throw UsageError("unknown model '" + tag + "' (expected icfd, icof, icsf, xfd, xof, xsf)");
    return *m;
}

int m_tx(const Config& c) { return c.M > 0 ? c.M : c.K; }

std::pair<int, int> k_range(const std::string& s) {
    const auto dots = s.find("..");
    try {
        if (dots == std::string::npos) throw std::invalid_argument("");
        const int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
        if (a < 2 || b < a) throw std::invalid_argument("");
        return {a, b};
    } catch (const std::exception&) {
        throw UsageError("--k-range wants A..B with 2 <= A <= B, got '" + s + "'");
    }
}

// Runs fn(i) for i in [0, n) on all cores; results keep index order.
template <class T, class Fn>
std::vector<T> parallel_map(int n, Fn fn) {
    std::vector<T> out(n);
    std::vector<std::exception_ptr> err(n);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i; (i = next++) < n;) {
            try {
                out[i] = fn(i);
            } catch (...) {
                err[i] = std::current_exception();
            }
        }
    };
    const int w = std::max(1, std::min<int>(n, static_cast<int>(std::thread::hardware_concurrency())));
    std::vector<std::thread> pool;
    for (int k = 1; k < w; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : err)
        if (e) std::rethrow_exception(e);
    return out;
}

int cmd_dof(const Config& c, std::ostream& os) {
    if (c.model.empty() || c.K == 0) throw UsageError("dof needs --model and --k");
    const ModelId model = model_of(c.model);
    const int M = m_tx(c);
    dof::DofValue v;
    try {
        v = dof::analytic(model, c.K, M);
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    }
    if (c.format == "json") {
        os << json{{"model", model.tag()}, {"K", c.K}, {"M", M}, {"dof", v.value.str()}, {"decimal", v.value.decimal(12)},
                   {"supported", v.supported}}
                  .dump()
           << "\n";
    } else {
        os << csv_row({"model", "K", "M", "dof", "decimal", "supported"});
        os << csv_row({model.tag(), std::to_string(c.K), std::to_string(M), v.value.str(), v.value.decimal(12),
                       v.supported ? "true" : "false"});
    }
    return kOk;
}

struct Column {
    std::string name;
    std::function<std::optional<Rational>(int K)> value;
};

std::vector<Column> table_columns(const Config& c, int K_max) {
    std::vector<std::string> models = c.models;
    if (models.empty()) models = {"icfd", "icof", "icsf", "xfd", "xof", "xsf"};
    std::vector<int> ms = c.m_list;
    if (ms.empty()) ms = {2, 3, 0};
    std::vector<Column> cols;
    auto ic = [](auto f) { return [f](int K) -> std::optional<Rational> { return K >= 3 ? std::optional(f(K)) : std::nullopt; }; };
    for (const auto& tag : models) {
        const ModelId model = model_of(tag);
        if (model == kICFD) cols.push_back({"icfd", ic([](int K) { return dof::dof_icfd_closed(K).value; })});
        if (model == kICOF) {
            if (c.per_w)
                for (int w = 2; w <= (K_max + 1) / 2; ++w)
                    cols.push_back({"icof_w" + std::to_string(w), [w](int K) -> std::optional<Rational> {
                                        if (K < 3 || w > (K + 1) / 2) return std::nullopt;
                                        return dof::icof_objective(w, K);
                                    }});
            cols.push_back({"icof", ic([](int K) { return dof::dof_icof(K).value; })});
        }
        if (model == kICSF) {
            if (c.per_w)
                for (int w = 2; w <= (K_max + 1) / 2; ++w)
                    cols.push_back({"icsf_w" + std::to_string(w), [w](int K) -> std::optional<Rational> {
                                        if (K < 3 || w > (K + 1) / 2) return std::nullopt;
                                        return dof::icsf_objective(w, K);
                                    }});
            cols.push_back({"icsf", ic([](int K) { return dof::dof_icsf(K).value; })});
        }
        if (model == kXFD)
            for (int M : ms) {
                if (M == 0)
                    cols.push_back({"xfd_MK", [](int K) -> std::optional<Rational> { return dof::dof_xfd(K, K); }});
                else if (M >= 2)
                    cols.push_back({"xfd_M" + std::to_string(M), [M](int K) -> std::optional<Rational> { return dof::dof_xfd(M, K); }});
                else
                    throw UsageError("--m-tx values for table must be >= 2, or 0 for M = K");
            }
        if (model == kXOF) cols.push_back({"xof", [](int K) -> std::optional<Rational> { return dof::dof_xof(K); }});
        if (model == kXSF) cols.push_back({"xsf", [](int K) -> std::optional<Rational> { return dof::dof_xsf(K); }});
    }
    return cols;
}

int cmd_table(const Config& c, std::ostream& os) {
    if (c.k_range.empty()) throw UsageError("table needs --k-range A..B");
    const auto [a, b] = k_range(c.k_range);
    const auto cols = table_columns(c, b);
    bool has_ic = false;
    for (const auto& col : cols) has_ic = has_ic || col.name.rfind("ic", 0) == 0;
    auto status = [&](int K) { return has_ic && K < 3 ? "unsupported" : "ok"; };
    const auto rows = parallel_map<std::vector<std::optional<Rational>>>(b - a + 1, [&](int i) {
        std::vector<std::optional<Rational>> r;
        for (const auto& col : cols) r.push_back(col.value(a + i));
        return r;
    });
    if (c.format == "json") {
        json arr = json::array();
        for (int i = 0; i <= b - a; ++i) {
            json row{{"K", a + i}};
            for (std::size_t k = 0; k < cols.size(); ++k) {
                if (!rows[i][k]) {
                    row[cols[k].name] = nullptr;
                } else {
                    row[cols[k].name] = {{"dof", rows[i][k]->str()}, {"decimal", rows[i][k]->decimal(12)}};
                }
            }
            row["status"] = status(a + i);
            arr.push_back(row);
        }
        os << arr.dump() << "\n";
        return kOk;
    }
    std::vector<std::string> head{"K"};
    for (const auto& col : cols) {
        head.push_back(col.name);
        head.push_back(col.name + "_dec");
    }
    head.push_back("status");
    os << csv_row(head);
    for (int i = 0; i <= b - a; ++i) {
        std::vector<std::string> cells{std::to_string(a + i)};
        for (const auto& v : rows[i]) {
            cells.push_back(v ? v->str() : "");
            cells.push_back(v ? v->decimal(12) : "");
        }
        cells.push_back(status(a + i));
        os << csv_row(cells);
    }
    return kOk;
}

template <class F>
SimReport simulate_one(const schemes::Policy& p, std::uint64_t seed, bool strict, std::ostream* trace) {
    return schemes::execute<F>(p, {seed, strict, trace}).report;
}

int cmd_simulate(const Config& c, std::ostream& os) {
    if (c.model.empty() || c.K == 0) throw UsageError("simulate needs --model and --k");
    if (c.trials < 1) throw UsageError("--trials must be positive");
    const ModelId model = model_of(c.model);
    const int M = m_tx(c);
    schemes::Policy p;
    Rational analytic;
    try {
        analytic = dof::analytic(model, c.K, M).value;
        p = schemes::build_policy(model, c.K, M);
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    } catch (const UnsupportedError& e) {
        throw UsageError(std::string(e.what()) + "; analytic value " + analytic.str() + " is available via 'dof'");
    }
    const bool complex = c.field == "complex";
    if (!c.trace.empty()) {
        std::ofstream tf(c.trace);
        if (!tf) throw UsageError("cannot write trace file " + c.trace);
        if (complex) simulate_one<ComplexField>(p, c.seed, c.strict, &tf);
        else simulate_one<PrimeField>(p, c.seed, c.strict, &tf);
    }
    const auto reports = parallel_map<SimReport>(c.trials, [&](int i) {
        const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(i);
        return complex ? simulate_one<ComplexField>(p, seed, c.strict, nullptr) : simulate_one<PrimeField>(p, seed, c.strict, nullptr);
    });
    bool failed = false;
    for (const auto& r : reports) failed = failed || !r.all_decodable() || (c.strict && !r.feasibility_violations.empty());
    if (c.format == "json") {
        json arr = json::array();
        for (const auto& r : reports) {
            json j = report_json(r);
            j["analytic_dof"] = analytic.str();
            arr.push_back(j);
        }
        os << arr.dump() << "\n";
    } else {
        os << csv_row({"scheme", "field", "seed", "M", "K", "symbols", "slots", "empirical_dof", "empirical_dec", "analytic_dof",
                       "matches", "decodable", "violations"});
        for (const auto& r : reports) {
            const bool match = r.empirical_dof && *r.empirical_dof == analytic;
            os << csv_row({r.scheme, r.field, std::to_string(r.seed), std::to_string(M), std::to_string(c.K),
                           std::to_string(r.symbols_injected), std::to_string(r.slots_used),
                           r.empirical_dof ? r.empirical_dof->str() : "", r.empirical_dof ? r.empirical_dof->decimal(12) : "",
                           analytic.str(), match ? "true" : "false", r.all_decodable() ? "true" : "false",
                           std::to_string(r.feasibility_violations.size())});
        }
    }
    return failed ? kFail : kOk;
}

int cmd_verify(const Config& c, std::ostream& os) {
    verify::AcceptanceOptions o;
    try {
        o.criteria = verify::scope_criteria(c.scope);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    o.seeds = c.trials;
    o.base_seed = c.seed;
    o.inject_fault = c.inject_fault;
    const auto results = verify::run_acceptance(o);
    bool ok = true;
    for (const auto& r : results) ok = ok && r.pass;
    if (c.format == "json") {
        json arr = json::array();
        for (const auto& r : results)
            arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"seconds", r.seconds}, {"detail", r.detail}});
        os << json{{"pass", ok}, {"criteria", arr}}.dump() << "\n";
    } else {
        os << csv_row({"id", "name", "result", "seconds", "detail"});
        for (const auto& r : results) {
            char secs[32];
            std::snprintf(secs, sizeof secs, "%.3f", r.seconds);
            os << csv_row({std::to_string(r.id), r.name, r.pass ? "PASS" : "FAIL", secs, r.detail});
        }
    }
    if (!ok)
        for (const auto& r : results)
            if (!r.pass) {
                std::cerr << "first failure: " << verify::format_line(r) << "\n";
                break;
            }
    return ok ? kOk : kFail;
}

int cmd_limits(const Config& c, std::ostream& os) {
    struct Row {
        std::string model, M;
        dof::Limit lim;
        std::optional<Rational> at_k;
    };
    std::vector<Row> rows;
    auto at = [&](auto f) -> std::optional<Rational> { return c.K > 0 ? std::optional(f()) : std::nullopt; };
    const int K = c.K;
    if (K != 0 && K < 3) throw UsageError("limits --k wants K >= 3");
    rows.push_back({"icfd", "K", dof::asymptote(kICFD), at([&] { return dof::dof_icfd_closed(K).value; })});
    rows.push_back({"icof", "K", dof::asymptote(kICOF), at([&] { return dof::dof_icof(K).value; })});
    rows.push_back({"icsf", "K", dof::asymptote(kICSF), at([&] { return dof::dof_icsf(K).value; })});
    for (int M : {2, 3})
        rows.push_back({"xfd", std::to_string(M), dof::asymptote(kXFD, M), at([&] { return dof::dof_xfd(M, K); })});
    rows.push_back({"xfd", "wide", dof::asymptote(kXFD, dof::kWideM), at([&] { return dof::dof_xfd(K / 2 + 1 + K % 2, K); })});
    rows.push_back({"xof", "K", dof::asymptote(kXOF), at([&] { return dof::dof_xof(K); })});
    rows.push_back({"xsf", "K", dof::asymptote(kXSF), at([&] { return dof::dof_xsf(K); })});
    char buf[32];
    if (c.format == "json") {
        json arr = json::array();
        for (const auto& r : rows) {
            json j{{"model", r.model}, {"M", r.M}, {"limit", r.lim.value}};
            j["exact"] = r.lim.exact ? json(r.lim.exact->str()) : json(nullptr);
            if (r.at_k) j["at_K"] = {{"K", K}, {"dof", r.at_k->str()}, {"decimal", r.at_k->decimal(12)}};
            arr.push_back(j);
        }
        os << arr.dump() << "\n";
        return kOk;
    }
    std::vector<std::string> head{"model", "M", "limit", "exact"};
    if (K) head.insert(head.end(), {"K", "dof_at_K", "dec_at_K"});
    os << csv_row(head);
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.12g", r.lim.value);
        std::vector<std::string> cells{r.model, r.M, buf, r.lim.exact ? r.lim.exact->str() : ""};
        if (r.at_k) cells.insert(cells.end(), {std::to_string(K), r.at_k->str(), r.at_k->decimal(12)});
        os << csv_row(cells);
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Degrees-of-freedom calculator and slot-level simulator for retrospective interference alignment"};
    app.require_subcommand(1);
    Config c;

    auto common = [&](CLI::App* s) {
        s->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        s->add_option("--out", c.out, "Output path (default stdout)");
    };
    auto model_opts = [&](CLI::App* s) {
        s->add_option("--model", c.model, "icfd, icof, icsf, xfd, xof or xsf");
        s->add_option("--k", c.K, "Number of receivers");
        s->add_option("--m-tx", c.M, "Number of transmitters (default K)");
    };

    auto* dof_cmd = app.add_subcommand("dof", "Analytic DoF of one model");
    model_opts(dof_cmd);
    common(dof_cmd);

    auto* table = app.add_subcommand("table", "DoF table over a range of K");
    table->add_option("--k-range", c.k_range, "A..B");
    table->add_option("--model", c.models, "Models to include (repeatable, default all)");
    table->add_option("--m-tx", c.m_list, "XFD transmitter counts (repeatable, 0 means M = K; default 2 3 0)");
    table->add_flag("--per-w", c.per_w, "Add one ICOF/ICSF column per candidate w");
    common(table);

    auto* sim = app.add_subcommand("simulate", "Slot-level simulation of a built-in scheme");
    model_opts(sim);
    sim->add_option("--seed", c.seed, "First seed");
    sim->add_option("--trials", c.trials, "Number of consecutive seeds");
    sim->add_option("--field", c.field, "Field backend")->check(CLI::IsMember({"prime", "complex"}));
    sim->add_flag("--strict,!--no-strict", c.strict, "Reject infeasible transmissions");
    sim->add_option("--trace", c.trace, "Write the JSON slot trace of the first seed");
    common(sim);

    auto* ver = app.add_subcommand("verify", "Acceptance suite");
    ver->add_option("--scope", c.scope,
                    "all, golden, consistency (or appendices), asymptotics, ordering, selection, simulation, phases or genericity");
    ver->add_option("--seed", c.seed, "Base seed");
    ver->add_option("--trials", c.trials, "Seeds per simulated scheme");
    ver->add_flag("--inject-fault", c.inject_fault, "Negative control: corrupt the recursion and drop one reception");
    common(ver);

    auto* lim = app.add_subcommand("limits", "Large-K limits, optionally against the value at --k");
    lim->add_option("--k", c.K, "Compare with the DoF at this K");
    common(lim);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    if (const char* env = std::getenv("RETROALIGN_SEED")) {
        try {
            c.seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "error: RETROALIGN_SEED is not an integer\n";
            return kUsage;
        }
    }

    std::ofstream file;
    if (!c.out.empty()) {
        file.open(c.out);
        if (!file) {
            std::cerr << "error: cannot write " << c.out << "\n";
            return kUsage;
        }
    }
    std::ostream& os = c.out.empty() ? std::cout : file;

    try {
        if (*dof_cmd) return cmd_dof(c, os);
        if (*table) return cmd_table(c, os);
        if (*sim) return cmd_simulate(c, os);
        if (*ver) return cmd_verify(c, os);
        if (*lim) return cmd_limits(c, os);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}
