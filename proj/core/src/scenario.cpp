#include "ldp/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ldp::scenario {

namespace {

[[noreturn]] void fail(int line, const std::string& key, const std::string& msg) {
    char buf[384];
    std::snprintf(buf, sizeof buf, "line %d, key '%s': %s", line, key.c_str(), msg.c_str());
    throw std::invalid_argument(buf);
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// One parsed value: either a number or head(arg, ...) with nested values.
struct Lit {
    bool is_number = false;
    double number = 0.0;
    std::string head;
    std::vector<Lit> args;
};

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
};

void skip_ws(Cursor& c) {
    while (c.pos < c.text.size() && std::isspace(static_cast<unsigned char>(c.text[c.pos])))
        ++c.pos;
}

bool eat(Cursor& c, char ch) {
    skip_ws(c);
    if (c.pos < c.text.size() && c.text[c.pos] == ch) {
        ++c.pos;
        return true;
    }
    return false;
}

Lit parse_lit(Cursor& c) {
    skip_ws(c);
    if (c.pos >= c.text.size()) throw std::invalid_argument("expected a value");
    const char ch = c.text[c.pos];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+' || ch == '.') {
        const char* start = c.text.c_str() + c.pos;
        char* end = nullptr;
        const double v = std::strtod(start, &end);
        if (end == start) throw std::invalid_argument("malformed number");
        c.pos += std::size_t(end - start);
        Lit lit;
        lit.is_number = true;
        lit.number = v;
        return lit;
    }
    if (!std::isalpha(static_cast<unsigned char>(ch)) && ch != '_')
        throw std::invalid_argument("expected an identifier or number");
    Lit lit;
    while (c.pos < c.text.size() &&
           (std::isalnum(static_cast<unsigned char>(c.text[c.pos])) || c.text[c.pos] == '_'))
        lit.head.push_back(c.text[c.pos++]);
    skip_ws(c);
    if (c.pos < c.text.size() && c.text[c.pos] == '(') {
        ++c.pos;
        if (eat(c, ')')) return lit;
        for (;;) {
            lit.args.push_back(parse_lit(c));
            if (eat(c, ',')) continue;
            if (eat(c, ')')) break;
            throw std::invalid_argument("expected ',' or ')' in an argument list");
        }
    }
    return lit;
}

Lit parse_single(const std::string& value) {
    Cursor c{value, 0};
    Lit lit = parse_lit(c);
    skip_ws(c);
    if (c.pos != value.size()) throw std::invalid_argument("trailing characters after value");
    return lit;
}

std::vector<Lit> parse_list(const std::string& value) {
    Cursor c{value, 0};
    std::vector<Lit> out;
    for (;;) {
        out.push_back(parse_lit(c));
        if (eat(c, ',')) continue;
        break;
    }
    skip_ws(c);
    if (c.pos != value.size()) throw std::invalid_argument("trailing characters after value");
    return out;
}

std::vector<double> parse_numbers(const std::string& value) {
    std::vector<double> out;
    for (const Lit& lit : parse_list(value)) {
        if (!lit.is_number) throw std::invalid_argument("expected a comma-separated number list");
        out.push_back(lit.number);
    }
    return out;
}

std::uint64_t parse_u64(const std::string& value, std::uint64_t lo, std::uint64_t hi) {
    const std::string v = trim(value);
    if (v.empty()) throw std::invalid_argument("expected a nonnegative integer");
    std::uint64_t n = 0;
    if (std::all_of(v.begin(), v.end(),
                    [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
        char* end = nullptr;
        n = std::strtoull(v.c_str(), &end, 10);
        if (end != v.c_str() + v.size()) throw std::invalid_argument("malformed integer");
    } else {
        const Lit lit = parse_single(v);
        if (!lit.is_number || lit.number < 0.0 || lit.number != std::floor(lit.number) ||
            lit.number > 1.8e19)
            throw std::invalid_argument("expected a nonnegative integer");
        n = static_cast<std::uint64_t>(lit.number);
    }
    if (n < lo || n > hi) throw std::invalid_argument("integer out of range");
    return n;
}

double num_arg(const Lit& lit, std::size_t i) {
    if (i >= lit.args.size() || !lit.args[i].is_number)
        throw std::invalid_argument("expected a numeric argument for '" + lit.head + "'");
    return lit.args[i].number;
}

void expect_args(const Lit& lit, std::size_t n) {
    if (lit.args.size() != n)
        throw std::invalid_argument("'" + lit.head + "' takes " + std::to_string(n) +
                                    " argument(s)");
}

laws::IncrementLaw to_law(const Lit& lit) {
    if (lit.is_number) throw std::invalid_argument("expected a law literal");
    if (lit.head == "pareto") {
        expect_args(lit, 2);
        return laws::IncrementLaw::pareto(num_arg(lit, 0), num_arg(lit, 1));
    }
    if (lit.head == "pareto_log") {
        expect_args(lit, 3);
        return laws::IncrementLaw::pareto_log(num_arg(lit, 0), num_arg(lit, 1), num_arg(lit, 2));
    }
    if (lit.head == "stable") {
        expect_args(lit, 1);
        return laws::IncrementLaw::one_sided_stable(num_arg(lit, 0));
    }
    if (lit.head == "exponential") {
        expect_args(lit, 1);
        return laws::IncrementLaw::exponential(num_arg(lit, 0));
    }
    throw std::invalid_argument("unknown law '" + lit.head + "'");
}

kernels::MemoryKernel to_kernel(const Lit& lit) {
    if (lit.is_number) throw std::invalid_argument("expected a kernel literal");
    if (lit.head == "exponential") {
        expect_args(lit, 1);
        return kernels::MemoryKernel::exponential(num_arg(lit, 0));
    }
    if (lit.head == "algebraic") {
        expect_args(lit, 1);
        return kernels::MemoryKernel::algebraic(num_arg(lit, 0));
    }
    if (lit.head == "custom") {
        std::vector<double> taps;
        for (std::size_t i = 0; i < lit.args.size(); ++i) taps.push_back(num_arg(lit, i));
        return kernels::MemoryKernel::custom_taps(std::move(taps));
    }
    throw std::invalid_argument("unknown kernel '" + lit.head + "'");
}

laws::BatchLaw to_batch(const Lit& lit) {
    if (lit.is_number) throw std::invalid_argument("expected a batch-law literal");
    if (lit.head == "zeta") {
        expect_args(lit, 1);
        return laws::BatchLaw::zeta(num_arg(lit, 0));
    }
    if (lit.head == "shifted_poisson") {
        expect_args(lit, 1);
        return laws::BatchLaw::shifted_poisson(num_arg(lit, 0));
    }
    if (lit.head == "shifted_poisson_tracking") {
        expect_args(lit, 0);
        return laws::BatchLaw::shifted_poisson_tracking_t();
    }
    if (lit.head == "deterministic") {
        expect_args(lit, 1);
        const double k = num_arg(lit, 0);
        if (k < 1.0 || k != std::floor(k))
            throw std::invalid_argument("deterministic batch size must be a positive integer");
        return laws::BatchLaw::deterministic(static_cast<std::uint64_t>(k));
    }
    throw std::invalid_argument("unknown batch law '" + lit.head + "'");
}

counting::CountingSpec to_counting(const Lit& lit) {
    if (lit.is_number) throw std::invalid_argument("expected a counting literal");
    if (lit.head == "poisson") {
        expect_args(lit, 1);
        return counting::CountingSpec::poisson(num_arg(lit, 0));
    }
    if (lit.head == "geometric") {
        expect_args(lit, 2);
        return counting::CountingSpec::geometric(
            counting::GrowthRule::power(num_arg(lit, 0), num_arg(lit, 1)));
    }
    if (lit.head == "renewal") {
        expect_args(lit, 1);
        return counting::CountingSpec::renewal(to_law(lit.args[0]));
    }
    if (lit.head == "compound_poisson") {
        expect_args(lit, 2);
        return counting::CountingSpec::compound_poisson(num_arg(lit, 0), to_batch(lit.args[1]));
    }
    if (lit.head == "first_passage") {
        expect_args(lit, 1);
        return counting::CountingSpec::first_passage(to_batch(lit.args[0]));
    }
    if (lit.head == "two_point") {
        expect_args(lit, 3);
        return counting::CountingSpec::two_point(
            counting::GrowthRule::power(num_arg(lit, 0), num_arg(lit, 1)), num_arg(lit, 2));
    }
    if (lit.head == "deterministic") {
        expect_args(lit, 1);
        const double n = num_arg(lit, 0);
        if (n < 1.0 || n != std::floor(n))
            throw std::invalid_argument("deterministic count must be a positive integer");
        return counting::CountingSpec::deterministic(static_cast<std::uint64_t>(n));
    }
    throw std::invalid_argument("unknown counting process '" + lit.head + "'");
}

struct Entry {
    std::string value;
    int line = 0;
};

const char* const kKnownKeys[] = {
    "name",     "model",   "law",         "kernel",      "counting",    "n_grid",
    "t_grid",   "x_rule",  "budget",      "seed",        "cap",         "workers",
    "method",   "mix_p",   "tolerance",   "checks",      "s_rule",      "lambda",
    "svip_family", "svip_lambda", "svip_eta", "out",     "force_uncentered",
};

bool known_key(const std::string& key) {
    for (const char* k : kKnownKeys)
        if (key == k) return true;
    return false;
}

std::string check_name(Check check) {
    switch (check) {
        case Check::mc_vs_prediction: return "mc_vs_prediction";
        case Check::error_term: return "error_term";
        case Check::svip: return "svip";
        case Check::scaling: return "scaling";
    }
    return "";
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    std::map<std::string, Entry> entries;
    {
        std::istringstream in(text);
        std::string raw;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            const std::size_t hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            const std::string line = trim(raw);
            if (line.empty()) continue;
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                fail(line_no, line.substr(0, 24), "expected 'key = value'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty()) fail(line_no, key, "expected 'key = value'");
            if (!known_key(key)) fail(line_no, key, "unknown key");
            if (entries.count(key)) fail(line_no, key, "duplicate key");
            entries[key] = Entry{value, line_no};
        }
    }

    Scenario sc;
    const auto get = [&](const char* key) -> const Entry* {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };
    const auto need = [&](const char* key) -> const Entry& {
        const Entry* e = get(key);
        if (!e) fail(0, key, "required key is missing");
        return *e;
    };
    const auto forbid = [&](const char* key, const char* why) {
        if (const Entry* e = get(key)) fail(e->line, key, why);
    };

    {
        const Entry& e = need("name");
        sc.name = e.value;
        for (char ch : sc.name)
            if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-'))
                fail(e.line, "name", "name must use letters, digits, '_' or '-'");
    }

    models::ModelKind kind = models::ModelKind::iid;
    {
        const Entry& e = need("model");
        if (e.value == "iid")
            kind = models::ModelKind::iid;
        else if (e.value == "weighted")
            kind = models::ModelKind::weighted;
        else if (e.value == "stopped")
            kind = models::ModelKind::stopped;
        else
            fail(e.line, "model", "expected iid, weighted, or stopped");
    }

    laws::IncrementLaw law;
    {
        const Entry& e = need("law");
        try {
            law = to_law(parse_single(e.value));
        } catch (const std::exception& ex) {
            fail(e.line, "law", ex.what());
        }
    }

    switch (kind) {
        case models::ModelKind::iid: {
            forbid("kernel", "kernel applies to weighted models only");
            forbid("counting", "counting applies to stopped models only");
            sc.model = models::SumModel::iid(law, 1);
            break;
        }
        case models::ModelKind::weighted: {
            forbid("counting", "counting applies to stopped models only");
            const Entry& e = need("kernel");
            try {
                sc.model = models::SumModel::weighted(law, to_kernel(parse_single(e.value)), 1);
            } catch (const std::exception& ex) {
                fail(e.line, "kernel", ex.what());
            }
            break;
        }
        case models::ModelKind::stopped: {
            forbid("kernel", "kernel applies to weighted models only");
            const Entry& e = need("counting");
            try {
                sc.model = models::SumModel::stopped(law, to_counting(parse_single(e.value)), 1.0);
            } catch (const std::exception& ex) {
                fail(e.line, "counting", ex.what());
            }
            break;
        }
    }

    {
        const bool stopped = kind == models::ModelKind::stopped;
        const char* grid_key = stopped ? "t_grid" : "n_grid";
        forbid(stopped ? "n_grid" : "t_grid",
               stopped ? "stopped models use t_grid" : "iid and weighted models use n_grid");
        const Entry& e = need(grid_key);
        try {
            sc.grid = parse_numbers(e.value);
        } catch (const std::exception& ex) {
            fail(e.line, grid_key, ex.what());
        }
        double prev = 0.0;
        for (double v : sc.grid) {
            if (!(v > prev)) fail(e.line, grid_key, "grid values must be positive and increasing");
            if (!stopped && (v != std::floor(v) || v < 1.0))
                fail(e.line, grid_key, "n_grid values must be positive integers");
            prev = v;
        }
    }

    if (const Entry* e = get("x_rule")) {
        try {
            const Lit lit = parse_single(e->value);
            if (lit.head == "target_ld") {
                expect_args(lit, 1);
                sc.x_kind = XRuleKind::target_ld;
                sc.x_value = num_arg(lit, 0);
                if (!(sc.x_value > 0.0 && sc.x_value < 1.0))
                    throw std::invalid_argument("target_ld level must lie in (0,1)");
            } else if (lit.head == "fixed") {
                expect_args(lit, 1);
                sc.x_kind = XRuleKind::fixed;
                sc.x_value = num_arg(lit, 0);
                if (!(sc.x_value > 0.0)) throw std::invalid_argument("fixed level must be positive");
            } else if (lit.head == "list") {
                sc.x_kind = XRuleKind::list;
                for (std::size_t i = 0; i < lit.args.size(); ++i)
                    sc.x_list.push_back(num_arg(lit, i));
                if (sc.x_list.size() != sc.grid.size())
                    throw std::invalid_argument("list(...) must have one level per grid value");
            } else {
                throw std::invalid_argument("expected target_ld(v), fixed(x), or list(x1,...)");
            }
        } catch (const std::exception& ex) {
            fail(e->line, "x_rule", ex.what());
        }
    }

    {
        const Entry& e = need("budget");
        try {
            sc.budget = parse_u64(e.value, 1000, 1ull << 62);
        } catch (const std::exception& ex) {
            fail(e.line, "budget", ex.what());
        }
    }
    {
        const Entry& e = need("seed");
        try {
            sc.seed = parse_u64(e.value, 0, ~0ull);
        } catch (const std::exception& ex) {
            fail(e.line, "seed", ex.what());
        }
    }
    if (const Entry* e = get("cap")) {
        try {
            sc.cap = parse_u64(e->value, 1024, 1ull << 40);
        } catch (const std::exception& ex) {
            fail(e->line, "cap", ex.what());
        }
    }
    if (const Entry* e = get("workers")) {
        try {
            sc.workers = int(parse_u64(e->value, 1, 256));
        } catch (const std::exception& ex) {
            fail(e->line, "workers", ex.what());
        }
    }
    if (const Entry* e = get("method")) {
        if (e->value == "naive")
            sc.method = mc::Method::naive;
        else if (e->value == "bigjump_is")
            sc.method = mc::Method::bigjump_is;
        else
            fail(e->line, "method", "expected naive or bigjump_is");
        if (sc.method == mc::Method::bigjump_is && kind != models::ModelKind::iid)
            fail(e->line, "method", "bigjump_is applies to iid models only");
    }
    if (const Entry* e = get("mix_p")) {
        try {
            const Lit lit = parse_single(e->value);
            if (!lit.is_number || !(lit.number > 0.0 && lit.number < 1.0))
                throw std::invalid_argument("mix_p must lie in (0,1)");
            sc.mix_p = lit.number;
        } catch (const std::exception& ex) {
            fail(e->line, "mix_p", ex.what());
        }
    }
    if (const Entry* e = get("tolerance")) {
        try {
            const Lit lit = parse_single(e->value);
            if (!lit.is_number || !(lit.number > 0.0))
                throw std::invalid_argument("tolerance must be positive");
            sc.tolerance = lit.number;
        } catch (const std::exception& ex) {
            fail(e->line, "tolerance", ex.what());
        }
    }

    if (const Entry* e = get("checks")) {
        std::vector<Check> checks;
        const auto has = [&](Check c) {
            return std::find(checks.begin(), checks.end(), c) != checks.end();
        };
        try {
            for (const Lit& lit : parse_list(e->value)) {
                if (lit.is_number || !lit.args.empty())
                    throw std::invalid_argument("checks must be bare names");
                Check c;
                if (lit.head == "mc_vs_prediction")
                    c = Check::mc_vs_prediction;
                else if (lit.head == "error_term")
                    c = Check::error_term;
                else if (lit.head == "svip")
                    c = Check::svip;
                else if (lit.head == "scaling")
                    c = Check::scaling;
                else
                    throw std::invalid_argument("unknown check '" + lit.head + "'");
                if (!has(c)) checks.push_back(c);
            }
        } catch (const std::exception& ex) {
            fail(e->line, "checks", ex.what());
        }
        if (checks.empty()) fail(e->line, "checks", "at least one check is required");
        sc.checks = std::move(checks);
    }

    const auto wants = [&](Check c) {
        return std::find(sc.checks.begin(), sc.checks.end(), c) != sc.checks.end();
    };

    if (const Entry* e = get("s_rule")) {
        try {
            const Lit lit = parse_single(e->value);
            if (lit.head != "power") throw std::invalid_argument("expected power(coeff, exponent)");
            expect_args(lit, 2);
            sc.s_coeff = num_arg(lit, 0);
            sc.s_exponent = num_arg(lit, 1);
            if (!(sc.s_coeff > 0.0)) throw std::invalid_argument("s-rule coefficient must be positive");
            if (!(sc.s_exponent > 0.0))
                throw std::invalid_argument("s-rule exponent must be positive so that s_t decreases");
        } catch (const std::exception& ex) {
            fail(e->line, "s_rule", ex.what());
        }
    } else if (wants(Check::error_term)) {
        fail(0, "s_rule", "the error_term check requires s_rule = power(coeff, exponent)");
    }

    if (const Entry* e = get("lambda")) {
        try {
            sc.lambda_values = parse_numbers(e->value);
            if (sc.lambda_values.empty()) throw std::invalid_argument("lambda list is empty");
            for (double v : sc.lambda_values)
                if (!(v > 0.0)) throw std::invalid_argument("lambda values must be positive");
        } catch (const std::exception& ex) {
            fail(e->line, "lambda", ex.what());
        }
    }

    if (const Entry* e = get("svip_family")) {
        if (e->value != "constant" && e->value != "log" && e->value != "nonuniform")
            fail(e->line, "svip_family", "expected constant, log, or nonuniform");
        sc.svip_family = e->value;
    }
    if (const Entry* e = get("svip_lambda")) {
        try {
            const Lit lit = parse_single(e->value);
            if (!lit.is_number || !(lit.number > 0.0))
                throw std::invalid_argument("svip_lambda must be positive");
            sc.svip_lambda = lit.number;
        } catch (const std::exception& ex) {
            fail(e->line, "svip_lambda", ex.what());
        }
    }
    if (const Entry* e = get("svip_eta")) {
        try {
            const Lit lit = parse_single(e->value);
            if (!lit.is_number || !(lit.number > 0.0))
                throw std::invalid_argument("svip_eta must be positive");
            sc.svip_eta = lit.number;
        } catch (const std::exception& ex) {
            fail(e->line, "svip_eta", ex.what());
        }
    }

    if (const Entry* e = get("force_uncentered")) {
        if (e->value == "true")
            sc.model.force_uncentered = true;
        else if (e->value == "false")
            sc.model.force_uncentered = false;
        else
            fail(e->line, "force_uncentered", "expected true or false");
    }

    sc.out = get("out") ? get("out")->value : sc.name + ".csv";

    return sc;
}

laws::IncrementLaw parse_law(const std::string& text) {
    return to_law(parse_single(trim(text)));
}

counting::CountingSpec parse_counting(const std::string& text) {
    return to_counting(parse_single(trim(text)));
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::vector<std::string> describe(const Scenario& sc) {
    std::vector<std::string> lines;
    const auto add = [&](const std::string& key, const std::string& value) {
        lines.push_back(key + " = " + value);
    };
    const auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return std::string(buf);
    };
    const auto num_list = [&](const std::vector<double>& vs) {
        std::string out;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i) out += ",";
            out += num(vs[i]);
        }
        return out;
    };
    add("name", sc.name);
    switch (sc.model.kind) {
        case models::ModelKind::iid: add("model", "iid"); break;
        case models::ModelKind::weighted: add("model", "weighted"); break;
        case models::ModelKind::stopped: add("model", "stopped"); break;
    }
    add("law", sc.model.law.describe());
    if (sc.model.kind == models::ModelKind::weighted) add("kernel", sc.model.kernel.describe());
    if (sc.model.kind == models::ModelKind::stopped) add("counting", sc.model.counting.describe());
    add(sc.model.kind == models::ModelKind::stopped ? "t_grid" : "n_grid", num_list(sc.grid));
    switch (sc.x_kind) {
        case XRuleKind::target_ld: add("x_rule", "target_ld(" + num(sc.x_value) + ")"); break;
        case XRuleKind::fixed: add("x_rule", "fixed(" + num(sc.x_value) + ")"); break;
        case XRuleKind::list: add("x_rule", "list(" + num_list(sc.x_list) + ")"); break;
    }
    add("budget", std::to_string(sc.budget));
    add("seed", std::to_string(sc.seed));
    add("cap", std::to_string(sc.cap));
    add("workers", std::to_string(sc.workers));
    add("method", sc.method == mc::Method::naive ? "naive" : "bigjump_is");
    add("mix_p", num(sc.mix_p));
    add("tolerance", num(sc.tolerance));
    {
        std::string cs;
        for (std::size_t i = 0; i < sc.checks.size(); ++i) {
            if (i) cs += ",";
            cs += check_name(sc.checks[i]);
        }
        add("checks", cs);
    }
    const auto wants = [&](Check c) {
        return std::find(sc.checks.begin(), sc.checks.end(), c) != sc.checks.end();
    };
    if (wants(Check::error_term)) {
        add("s_rule", "power(" + num(sc.s_coeff) + "," + num(sc.s_exponent) + ")");
        add("lambda", num_list(sc.lambda_values));
    }
    if (wants(Check::svip)) {
        add("svip_family", sc.svip_family);
        add("svip_lambda", num(sc.svip_lambda));
        add("svip_eta", num(sc.svip_eta));
    }
    if (sc.model.force_uncentered) add("force_uncentered", "true");
    add("out", sc.out);
    return lines;
}

}  // namespace ldp::scenario
