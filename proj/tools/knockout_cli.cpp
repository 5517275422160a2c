// knockout: command-line front end for the knockout library.
//
// Human-readable tables go to stdout. With --output, the same numbers are
// written as CSV (one file per table, '#' metadata lines first) or as a
// single JSON document.

#include <knockout/knockout.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <variant>

namespace ko = knockout;
using json = nlohmann::ordered_json;

namespace {

enum Exit : int { kOk = 0, kInternal = 1, kInputError = 2, kNegative = 3, kResource = 4 };

constexpr std::uint64_t kDefaultEnumerateCap = 10'000'000;

struct RunConfig {
    std::string command;
    std::string input;
    std::string ranks;
    std::optional<std::string> season;
    std::vector<std::string> drop;
    std::string target;
    std::uint64_t seed = 1;
    std::uint64_t samples = ko::kDefaultSamples;
    double step = 0.01;
    double threshold = 0.05;
    std::optional<std::string> format;
    std::string output;
    unsigned workers = 1;
    std::optional<std::uint64_t> limit;
    std::string method = "auto";
    std::string mode = "per-draw-exact";
    std::string ks = "auto";
    bool xmin_scan = false;
    std::optional<std::size_t> n;
    double pr_b = 0.5;
    bool realize = false;
};

json config_json(const RunConfig& c) {
    json j;
    j["input"] = c.input;
    j["ranks"] = c.ranks;
    j["season"] = c.season ? json(*c.season) : json(nullptr);
    j["drop"] = c.drop;
    j["target"] = c.target;
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    j["step"] = c.step;
    j["threshold"] = c.threshold;
    j["workers"] = c.workers;
    j["limit"] = c.limit ? json(*c.limit) : json(nullptr);
    j["method"] = c.method;
    j["mode"] = c.mode;
    j["ks"] = c.ks;
    j["xmin_scan"] = c.xmin_scan;
    j["n"] = c.n ? json(*c.n) : json(nullptr);
    j["pr_b"] = c.pr_b;
    j["realize"] = c.realize;
    return j;
}

// ---------------------------------------------------------------------------
// Report tables

using Cell = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string>;

struct OutTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Report {
    json metadata = json::object();
    std::vector<OutTable> tables;
};

std::string csv_cell(const Cell& cell) {
    struct {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(std::uint64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return ko::csv::real(v); }
        std::string operator()(const std::string& s) const { return ko::csv::quote(s); }
    } visitor;
    return std::visit(visitor, cell);
}

json json_cell(const Cell& cell) {
    struct {
        json operator()(std::monostate) const { return nullptr; }
        json operator()(bool b) const { return b; }
        json operator()(std::int64_t v) const { return v; }
        json operator()(std::uint64_t v) const { return v; }
        json operator()(double v) const { return std::isfinite(v) ? json(v) : json(nullptr); }
        json operator()(const std::string& s) const { return s; }
    } visitor;
    return std::visit(visitor, cell);
}

template <class T>
Cell opt_cell(const std::optional<T>& v) {
    if (!v) return std::monostate{};
    return Cell(*v);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ko::InvalidArgument("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw ko::InvalidArgument("failed writing '" + path.string() + "'");
}

std::string resolved_format(const RunConfig& c) {
    if (c.format) return *c.format;
    return std::filesystem::path(c.output).extension() == ".json" ? "json" : "csv";
}

void write_report(const RunConfig& c, const Report& report) {
    if (c.output.empty()) return;
    const json config = config_json(c);
    if (resolved_format(c) == "json") {
        json doc;
        doc["tool"] = "knockout";
        doc["version"] = std::string(ko::kVersion);
        doc["command"] = c.command;
        doc["config"] = config;
        doc["metadata"] = report.metadata;
        json tables = json::object();
        for (const auto& t : report.tables) {
            json rows = json::array();
            for (const auto& row : t.rows) {
                json r = json::object();
                for (std::size_t k = 0; k < t.columns.size(); ++k) r[t.columns[k]] = json_cell(row[k]);
                rows.push_back(std::move(r));
            }
            tables[t.name] = std::move(rows);
        }
        doc["tables"] = std::move(tables);
        write_file(c.output, doc.dump(2) + "\n");
        return;
    }
    const std::filesystem::path base(c.output);
    for (std::size_t k = 0; k < report.tables.size(); ++k) {
        const auto& t = report.tables[k];
        auto path = base;
        if (k > 0) path.replace_filename(base.stem().string() + "." + t.name + base.extension().string());
        std::ostringstream out;
        out << "# tool: knockout " << ko::kVersion << '\n'
            << "# command: " << c.command << '\n'
            << "# config: " << config.dump() << '\n'
            << "# metadata: " << report.metadata.dump() << '\n'
            << "# table: " << t.name << '\n';
        ko::csv::write_row(out, t.columns);
        for (const auto& row : t.rows) {
            std::vector<std::string> cells;
            for (const auto& cell : row) cells.push_back(csv_cell(cell));
            ko::csv::write_row(out, cells);
        }
        write_file(path, out.str());
    }
}

/// Left-aligned text columns, right-aligned everything else.
void print_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
                 const std::vector<bool>& left = {}) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t k = 0; k < header.size(); ++k) width[k] = header[k].size();
    for (const auto& r : rows)
        for (std::size_t k = 0; k < r.size(); ++k) width[k] = std::max(width[k], r[k].size());
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t k = 0; k < r.size(); ++k) {
            const bool l = k < left.size() && left[k];
            std::cout << (k ? "  " : "") << (l ? std::left : std::right) << std::setw(static_cast<int>(width[k])) << r[k];
        }
        std::cout << std::right << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
}

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

std::string opt_fixed(const std::optional<double>& v, int digits) { return v ? fixed(*v, digits) : "-"; }

// ---------------------------------------------------------------------------
// Inputs

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ko::InvalidArgument("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

enum class InputKind { matches, head_to_head, pairs, values };

InputKind detect(const std::string& text, const std::string& path) {
    const auto header = ko::csv::parse(text).header;
    if (header == ko::kMatchesHeader) return InputKind::matches;
    if (header == ko::kHeadToHeadHeader) return InputKind::head_to_head;
    if (header == ko::kPairsHeader) return InputKind::pairs;
    if (header == ko::kValuesHeader) return InputKind::values;
    throw ko::InvalidArgument("'" + path + "' has an unrecognised header; expected matches, h2h, pairs or values CSV");
}

std::string_view kind_name(InputKind k) {
    switch (k) {
    case InputKind::matches: return "matches";
    case InputKind::head_to_head: return "h2h";
    case InputKind::pairs: return "pairs";
    case InputKind::values: return "values";
    }
    return "?";
}

ko::RankingTable load_ranks(const RunConfig& c) {
    if (c.ranks.empty()) throw ko::InvalidArgument("--ranks is required with match or head-to-head input");
    std::istringstream in(slurp(c.ranks));
    return ko::read_ranks(in);
}

ko::PlayerId resolve_player(const ko::PlayerTable& players, const std::string& name) {
    if (auto id = players.find(name)) return *id;
    throw ko::InvalidArgument("unknown player '" + name + "'");
}

struct Dataset {
    ko::TournamentPair pair;
    InputKind kind;
};

Dataset load_tournament(const RunConfig& c) {
    const auto text = slurp(c.input);
    const auto kind = detect(text, c.input);
    std::istringstream in(text);
    Dataset ds{{}, kind};
    switch (kind) {
    case InputKind::matches: ds.pair = ko::soccer_to_tournaments(ko::read_matches(in), load_ranks(c), c.season); break;
    case InputKind::head_to_head: ds.pair = ko::tennis_to_tournaments(ko::read_head_to_head(in), load_ranks(c)); break;
    case InputKind::pairs: ds.pair = ko::pairs_to_tournaments(ko::read_pairs(in)); break;
    case InputKind::values:
        throw ko::InvalidArgument("'" + c.input + "' holds a sample of values, not a tournament");
    }
    for (const auto& name : c.drop) ds.pair = ko::drop_player(ds.pair, resolve_player(ds.pair.deterministic.players(), name));
    return ds;
}

json dataset_metadata(const Dataset& ds) {
    json m;
    m["input_kind"] = std::string(kind_name(ds.kind));
    m["players"] = ds.pair.deterministic.size();
    json imputed = json::array();
    for (const auto& [a, b] : ds.pair.imputed_pairs) imputed.push_back(json::array({a, b}));
    m["imputed_pairs"] = std::move(imputed);
    return m;
}

/// Player ids in rank order.
std::vector<ko::PlayerId> by_rank(const ko::PlayerTable& players) {
    std::vector<ko::PlayerId> ids(players.size());
    for (const auto& p : players.players()) ids[p.rank - 1] = p.id;
    return ids;
}

ko::SamplingMode parse_mode(const std::string& m) {
    return m == "full-simulation" ? ko::SamplingMode::full_simulation : ko::SamplingMode::per_draw_exact;
}

ko::WinProbVector win_probs(const ko::ProbabilisticTournament& t, const RunConfig& c) {
    const bool exact = c.method == "exact" || (c.method == "auto" && t.size() <= ko::kMaxSubsetDpPlayers);
    if (exact) return ko::exact_uniform_win_probs(t, c.workers);
    return ko::sample_uniform_win_probs(t, c.samples, c.seed, parse_mode(c.mode), c.workers);
}

json winprob_metadata(const ko::WinProbVector& wp) {
    json m;
    m["method"] = std::string(ko::to_string(wp.method));
    if (wp.method == ko::WinProbMethod::sampled) {
        m["mode"] = std::string(ko::to_string(wp.mode));
        m["samples"] = wp.samples;
    }
    return m;
}

/// A positive sample for the statistics commands: read directly from a
/// values file, or the uniform-draw win probabilities of a tournament.
struct SampleSource {
    ko::EmpiricalSample sample;
    std::size_t players = 0;
    std::optional<double> average_upset;
    json metadata;
};

SampleSource load_sample(const RunConfig& c) {
    const auto text = slurp(c.input);
    const auto kind = detect(text, c.input);
    std::vector<double> raw;
    SampleSource src;
    if (kind == InputKind::values) {
        std::istringstream in(text);
        raw = ko::read_values(in);
        src.metadata["input_kind"] = "values";
    } else {
        const auto ds = load_tournament(c);
        const auto wp = win_probs(ds.pair.probabilistic, c);
        raw = wp.p;
        src.average_upset = ko::average_upset_probability(ds.pair.probabilistic);
        src.metadata = dataset_metadata(ds);
        src.metadata["win_probabilities"] = winprob_metadata(wp);
    }
    src.players = raw.size();
    std::vector<double> positive;
    for (double v : raw)
        if (v != 0.0) positive.push_back(v);
    src.metadata["values"] = raw.size();
    src.metadata["excluded_zero_values"] = raw.size() - positive.size();
    src.sample = ko::EmpiricalSample(std::move(positive), std::filesystem::path(c.input).stem().string());
    return src;
}

ko::KsMethod parse_ks(const std::string& m) {
    if (m == "asymptotic") return ko::KsMethod::asymptotic;
    if (m == "exact") return ko::KsMethod::exact_permutation;
    return ko::KsMethod::automatic;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_fix(const RunConfig& c) {
    const auto ds = load_tournament(c);
    const auto& t = ds.pair.deterministic;
    const auto target = resolve_player(t.players(), c.target);
    const auto r = ko::find_winning_draw(t, target);

    Report rep;
    rep.metadata = dataset_metadata(ds);
    OutTable out{"fix", {"target", "found", "bracket", "choice_points", "solutions_found"}, {}};
    if (r.draw) {
        const auto bracket = ko::format_bracket(*r.draw, t.players());
        std::cout << "winning draw for " << c.target << ": " << bracket << '\n'
                  << "choice points: " << r.stats.choice_points << "  time: " << fixed(r.stats.elapsed_seconds, 6)
                  << " s\n";
        out.rows.push_back({c.target, true, bracket, r.stats.choice_points, r.stats.solutions_found});
    } else {
        std::cout << "no winning seeding for " << c.target << '\n';
        out.rows.push_back({c.target, false, std::monostate{}, r.stats.choice_points, r.stats.solutions_found});
    }
    rep.tables.push_back(std::move(out));
    write_report(c, rep);
    return r.draw ? kOk : kNegative;
}

int cmd_count(const RunConfig& c) {
    const auto ds = load_tournament(c);
    const auto& t = ds.pair.deterministic;
    auto report = ko::count_winning_draws(t, c.workers);
    const auto cap = c.limit.value_or(kDefaultEnumerateCap);
    ko::instrument_search(report, t, cap);

    Report rep;
    rep.metadata = dataset_metadata(ds);
    rep.metadata["total_draws"] = report.total_draws.str();
    rep.metadata["enumerate_cap"] = cap;
    OutTable out{"count", {"rank", "name", "seedings_won", "percent_total", "nodes_first", "nodes_all"}, {}};
    std::vector<std::vector<std::string>> lines;
    std::uint64_t sum = 0;
    for (const auto id : by_rank(t.players())) {
        const auto& row = report.rows[id];
        const auto& p = t.players()[id];
        sum += row.count;
        std::optional<std::uint64_t> first, all;
        if (row.first) first = row.first->choice_points;
        if (row.all) all = row.all->choice_points;
        out.rows.push_back({std::uint64_t{p.rank}, p.name, row.count, 100.0 * row.share, opt_cell(first), opt_cell(all)});
        lines.push_back({std::to_string(p.rank), p.name, std::to_string(row.count), fixed(100.0 * row.share, 6),
                         first ? std::to_string(*first) : "-", all ? std::to_string(*all) : "-",
                         row.all ? fixed(row.all->elapsed_seconds, 3) : "-"});
    }
    rep.tables.push_back(std::move(out));
    print_table({"Rank", "Name", "Seedings Won", "% Total", "Nodes First", "Nodes All", "Time All (s)"}, lines,
                {false, true});
    std::cout << "total draws: " << report.total_draws << "  (sum of counts: " << sum << ")\n"
              << "counting time: " << fixed(report.elapsed_seconds, 3) << " s\n";
    write_report(c, rep);
    return kOk;
}

int cmd_kings(const RunConfig& c) {
    const auto ds = load_tournament(c);
    const auto& t = ds.pair.deterministic;
    const auto k = ko::kings(t);
    const auto cw = ko::condorcet_winner(t);

    Report rep;
    rep.metadata = dataset_metadata(ds);
    rep.metadata["condorcet_winner"] = cw ? json(t.players()[*cw].name) : json(nullptr);
    OutTable out{"kings", {"rank", "name"}, {}};
    std::vector<std::vector<std::string>> lines;
    for (const auto id : k) {
        const auto& p = t.players()[id];
        out.rows.push_back({std::uint64_t{p.rank}, p.name});
        lines.push_back({std::to_string(p.rank), p.name});
    }
    rep.tables.push_back(std::move(out));
    print_table({"Rank", "King"}, lines, {false, true});
    std::cout << "condorcet winner: " << (cw ? t.players()[*cw].name : "none") << '\n';
    write_report(c, rep);
    return kOk;
}

int cmd_winprob(const RunConfig& c) {
    const auto ds = load_tournament(c);
    const auto& t = ds.pair.probabilistic;
    const auto wp = win_probs(t, c);

    Report rep;
    rep.metadata = dataset_metadata(ds);
    rep.metadata["win_probabilities"] = winprob_metadata(wp);
    OutTable out{"winprob", {"rank", "name", "p_win"}, {}};
    std::vector<std::vector<std::string>> lines;
    for (const auto id : by_rank(t.players())) {
        const auto& p = t.players()[id];
        out.rows.push_back({std::uint64_t{p.rank}, p.name, wp.p[id]});
        lines.push_back({std::to_string(p.rank), p.name, fixed(wp.p[id], 6)});
    }
    rep.tables.push_back(std::move(out));
    print_table({"Rank", "Name", "P(win)"}, lines, {false, true});
    std::cout << "method: " << ko::to_string(wp.method);
    if (wp.method == ko::WinProbMethod::sampled) std::cout << " (" << ko::to_string(wp.mode) << ", " << wp.samples << " samples)";
    std::cout << '\n';
    write_report(c, rep);
    return kOk;
}

int cmd_gen_cr(const RunConfig& c) {
    const ko::CrParams params{*c.n, c.pr_b};
    auto t = ko::generate_cr(params);
    if (c.realize) {
        std::seed_seq seq{static_cast<std::uint32_t>(c.seed), static_cast<std::uint32_t>(c.seed >> 32)};
        std::mt19937_64 rng(seq);
        t = ko::ProbabilisticTournament::from_deterministic(ko::sample_deterministic(t, rng));
    }

    Report rep;
    rep.metadata["players"] = params.n;
    rep.metadata["average_upset"] = ko::average_upset_probability(t);
    OutTable out{"pairs", ko::kPairsHeader, {}};
    std::vector<std::vector<std::string>> lines;
    for (const auto& p : ko::to_pairs(t)) {
        out.rows.push_back({std::uint64_t{p.rank_a}, p.player_a, std::uint64_t{p.rank_b}, p.player_b, p.p_ab});
        lines.push_back({p.player_a, p.player_b, ko::csv::real(p.p_ab)});
    }
    rep.tables.push_back(std::move(out));
    if (c.output.empty()) print_table({"A", "B", "p(A beats B)"}, lines, {true, true});
    std::cout << "CR model: n=" << params.n << "  Pr(b)=" << params.pr_b << (c.realize ? "  (realized)" : "")
              << "  average upset " << fixed(ko::average_upset_probability(t), 6) << '\n';
    write_report(c, rep);
    return kOk;
}

int cmd_scan(const RunConfig& c) {
    auto src = load_sample(c);
    const std::size_t n = c.n.value_or(src.players);
    ko::ScanOptions options{c.step, c.threshold, parse_ks(c.ks), c.workers};
    const auto result = ko::scan_cr(src.sample, n, options, src.average_upset);

    Report rep;
    rep.metadata = src.metadata;
    rep.metadata["cr_players"] = n;
    OutTable steps{"scan", {"pr_b", "d", "p_value", "ks_method", "accepted"}, {}};
    std::vector<std::vector<std::string>> lines;
    for (const auto& st : result.steps) {
        steps.rows.push_back({st.pr_b, st.ks.d, st.ks.p_value, std::string(ko::to_string(st.ks.method)), st.accepted});
        lines.push_back({fixed(st.pr_b, 2), fixed(st.ks.d, 4), fixed(st.ks.p_value, 4), st.accepted ? "yes" : "no"});
    }
    const auto label = src.sample.label();
    OutTable range{"range", {"dataset", "average_upset", "min_accepted", "max_accepted"}, {}};
    range.rows.push_back({label, opt_cell(result.average_upset), opt_cell(result.min_accepted), opt_cell(result.max_accepted)});
    rep.tables.push_back(std::move(range));
    rep.tables.push_back(std::move(steps));

    print_table({"Pr(b)", "D", "p", "accepted"}, lines);
    std::cout << '\n';
    print_table({"Dataset", "Avg. Pr(b)", "Min", "Max"},
                {{label, opt_fixed(result.average_upset, 2), opt_fixed(result.min_accepted, 2),
                  opt_fixed(result.max_accepted, 2)}},
                {true});
    write_report(c, rep);
    return kOk;
}

std::vector<Cell> fit_row(const ko::FitResult& f) {
    const bool pl = f.family == ko::FitFamily::power_law;
    return {std::string(ko::to_string(f.family)),
            pl ? Cell(f.alpha) : Cell(std::monostate{}),
            f.xmin,
            pl ? Cell(std::monostate{}) : Cell(f.mu),
            pl ? Cell(std::monostate{}) : Cell(f.sigma),
            f.log_likelihood,
            std::uint64_t{f.sample_size},
            pl ? Cell(f.ks_distance) : Cell(std::monostate{})};
}

int cmd_fit(const RunConfig& c) {
    const auto src = load_sample(c);
    auto sample = src.sample;
    auto pl = ko::fit_power_law(sample, c.xmin_scan ? ko::XminMode::scan : ko::XminMode::fixed);
    if (c.xmin_scan) {
        std::vector<double> tail;
        for (double v : sample.values())
            if (v >= pl.xmin) tail.push_back(v);
        sample = ko::EmpiricalSample(std::move(tail), sample.label());
        pl = ko::fit_power_law(sample, pl.xmin);
    }
    const auto ln = ko::fit_lognormal(sample);

    Report rep;
    rep.metadata = src.metadata;
    rep.metadata["ccdf_convention"] = std::string(ko::kCcdfConvention);
    rep.metadata["lrt_convention"] = std::string(ko::kLrtConvention);
    OutTable fits{"fits", {"family", "alpha", "xmin", "mu", "sigma", "log_likelihood", "sample_size", "ks_distance"}, {}};
    fits.rows.push_back(fit_row(pl));
    fits.rows.push_back(fit_row(ln));
    OutTable ccdf{"ccdf", {"x", "ccdf"}, {}};
    for (const auto& pt : ko::ccdf_points(src.sample)) ccdf.rows.push_back({pt.x, pt.y});

    std::cout << "sample: " << src.sample.size() << " positive values";
    if (src.metadata.value("excluded_zero_values", std::uint64_t{0}) > 0)
        std::cout << " (" << src.metadata["excluded_zero_values"].get<std::uint64_t>() << " zeros excluded)";
    std::cout << '\n';
    print_table({"Family", "Parameters", "xmin", "log L", "m"},
                {{"power-law", "alpha=" + fixed(pl.alpha, 4), fixed(pl.xmin, 6), fixed(pl.log_likelihood, 4),
                  std::to_string(pl.sample_size)},
                 {"log-normal", "mu=" + fixed(ln.mu, 4) + " sigma=" + fixed(ln.sigma, 4), fixed(ln.xmin, 6),
                  fixed(ln.log_likelihood, 4), std::to_string(ln.sample_size)}},
                {true, true});

    const auto lrt = ko::likelihood_ratio_test(sample, ln, pl);
    OutTable test{"lrt", {"first", "second", "r", "p_value", "raw", "favoured"}, {}};
    const std::string favoured = lrt.r > 0 ? "log-normal" : lrt.r < 0 ? "power-law" : "neither";
    test.rows.push_back({std::string("log-normal"), std::string("power-law"), lrt.r, lrt.p_value, lrt.raw, favoured});
    std::cout << "likelihood ratio (log-normal vs power-law): R=" << fixed(lrt.r, 4) << "  p=" << fixed(lrt.p_value, 4)
              << "  favours " << favoured << '\n';

    rep.tables.push_back(std::move(fits));
    rep.tables.push_back(std::move(test));
    rep.tables.push_back(std::move(ccdf));
    write_report(c, rep);
    return kOk;
}

// ---------------------------------------------------------------------------

void add_output(CLI::App* sub, RunConfig& c) {
    sub->add_option("--output", c.output, "Write machine-readable results to this path");
    sub->add_option("--format", c.format, "csv or json (default: from the --output extension, else csv)")
        ->check(CLI::IsMember({"csv", "json"}));
}

void add_tournament_input(CLI::App* sub, RunConfig& c) {
    sub->add_option("--input", c.input, "matches, h2h or pairs CSV")->required();
    sub->add_option("--ranks", c.ranks, "ranks CSV (required with matches or h2h input)");
    sub->add_option("--season", c.season, "Use only this season of a matches file");
    sub->add_option("--drop", c.drop, "Remove this player before analysis (repeatable)");
}

void add_winprob_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--method", c.method, "Win probabilities: auto, exact or sampled")
        ->check(CLI::IsMember({"auto", "exact", "sampled"}))
        ->capture_default_str();
    sub->add_option("--mode", c.mode, "Sampling mode: per-draw-exact or full-simulation")
        ->check(CLI::IsMember({"per-draw-exact", "full-simulation"}))
        ->capture_default_str();
    sub->add_option("--samples", c.samples, "Number of sampled draws")->capture_default_str();
    sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
}

void add_workers(CLI::App* sub, RunConfig& c) {
    sub->add_option("--workers", c.workers, "Worker threads (0 = all cores)")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    RunConfig c;
    CLI::App app{"Knockout tournament analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ko::kVersion));

    auto* fix = app.add_subcommand("fix", "Find a draw that the target player wins");
    add_tournament_input(fix, c);
    fix->add_option("--target", c.target, "Target player name")->required();
    add_output(fix, c);

    auto* count = app.add_subcommand("count", "Count the draws won by each player (n <= 16)");
    add_tournament_input(count, c);
    count->add_option("--limit", c.limit, "Skip the all-draws search for players winning more draws than this");
    add_workers(count, c);
    add_output(count, c);

    auto* kings = app.add_subcommand("kings", "List kings and the Condorcet winner");
    add_tournament_input(kings, c);
    add_output(kings, c);

    auto* winprob = app.add_subcommand("winprob", "Win probabilities under a uniformly random draw");
    add_tournament_input(winprob, c);
    add_winprob_options(winprob, c);
    add_workers(winprob, c);
    add_output(winprob, c);

    auto* gen = app.add_subcommand("gen-cr", "Write a Condorcet Random model as a pairs file");
    gen->add_option("--n", c.n, "Number of players")->required();
    gen->add_option("--pr-b", c.pr_b, "Upset probability in (0, 0.5]")->required();
    gen->add_flag("--realize", c.realize, "Sample one deterministic tournament from the model");
    gen->add_option("--seed", c.seed, "Seed for --realize")->capture_default_str();
    add_output(gen, c);

    auto* scan = app.add_subcommand("scan", "KS-test a win-probability sample against CR models over Pr(b)");
    add_tournament_input(scan, c);
    scan->get_option("--input")->description("values CSV, or a tournament whose win probabilities are used");
    scan->add_option("--n", c.n, "Players in the CR model (default: size of the reference)");
    scan->add_option("--step", c.step, "Pr(b) grid step")->capture_default_str();
    scan->add_option("--threshold", c.threshold, "Significance level")->capture_default_str();
    scan->add_option("--ks", c.ks, "KS p-value: auto, asymptotic or exact")
        ->check(CLI::IsMember({"auto", "asymptotic", "exact"}))
        ->capture_default_str();
    add_winprob_options(scan, c);
    add_workers(scan, c);
    add_output(scan, c);

    auto* fit = app.add_subcommand("fit", "Fit power-law and log-normal models and compare them");
    add_tournament_input(fit, c);
    fit->get_option("--input")->description("values CSV, or a tournament whose win probabilities are used");
    fit->add_flag("--xmin-scan", c.xmin_scan, "Choose the power-law xmin by minimum KS distance");
    add_winprob_options(fit, c);
    add_workers(fit, c);
    add_output(fit, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }
    c.command = app.get_subcommands().front()->get_name();

    try {
        if (c.command == "fix") return cmd_fix(c);
        if (c.command == "count") return cmd_count(c);
        if (c.command == "kings") return cmd_kings(c);
        if (c.command == "winprob") return cmd_winprob(c);
        if (c.command == "gen-cr") return cmd_gen_cr(c);
        if (c.command == "scan") return cmd_scan(c);
        if (c.command == "fit") return cmd_fit(c);
    } catch (const ko::ResourceLimit& e) {
        std::cerr << "knockout: " << e.what() << '\n';
        return kResource;
    } catch (const ko::UndefinedTest& e) {
        std::cerr << "knockout: " << e.what() << '\n';
        return kNegative;
    } catch (const ko::InvalidArgument& e) {
        std::cerr << "knockout: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "knockout: internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kInternal;
}
