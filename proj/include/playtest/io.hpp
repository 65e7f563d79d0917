#pragma once
// File formats: key/value block text for configs, CSV for tabular artifacts.
//
// Every artifact a tool command writes starts with a single `#` manifest
// comment recording the tool version and the command line that produced it
// (minus --workers, so worker count never changes bytes). Readers skip any
// leading `#` lines, so artifacts remain valid inputs.
//
// Numbers are written with std::to_chars shortest round-trip formatting and
// parsed with std::from_chars, so write-then-read is bit-exact. None of the
// field values can contain a comma, so CSV needs no quoting.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "playtest/env.hpp"
#include "playtest/errors.hpp"
#include "playtest/eval.hpp"
#include "playtest/mcts.hpp"
#include "playtest/policy.hpp"
#include "playtest/predict.hpp"
#include "playtest/run_record.hpp"
#include "playtest/stats.hpp"

namespace playtest {

inline constexpr const char* kToolVersion = "0.1.0";

// ---- number formatting ----

inline std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline std::string format_u64(std::uint64_t value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline std::string format_int(long long value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

template <typename T>
inline bool parse_number(std::string_view token, T& out) {
    token = trim(token);
    if (token.empty()) return false;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

inline double require_double(std::string_view token, const std::string& context) {
    double v = 0.0;
    if (!parse_number(token, v)) throw ConfigError(context + ": not a number: '" + std::string(token) + "'");
    return v;
}

inline int require_int(std::string_view token, const std::string& context) {
    int v = 0;
    if (!parse_number(token, v)) throw ConfigError(context + ": not an integer: '" + std::string(token) + "'");
    return v;
}

inline std::uint64_t require_u64(std::string_view token, const std::string& context) {
    std::uint64_t v = 0;
    if (!parse_number(token, v))
        throw ConfigError(context + ": not an unsigned integer: '" + std::string(token) + "'");
    return v;
}

inline std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            return fields;
        }
        fields.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t pos = text.find('\n', start);
        if (pos == std::string::npos) {
            if (start < text.size()) lines.emplace_back(text.substr(start));
            break;
        }
        lines.emplace_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    return lines;
}

}  // namespace detail

// ---- raw file access ----

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingInputError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw MissingInputError("read failed: " + path);
    return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

// ---- manifest ----

// Drop --workers (both "--workers N" and "--workers=N") from an argument
// list so the manifest is identical for any worker count.
inline std::vector<std::string> strip_workers(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--workers") {
            if (i + 1 < args.size()) ++i;
            continue;
        }
        if (args[i].rfind("--workers=", 0) == 0) continue;
        out.push_back(args[i]);
    }
    return out;
}

inline std::string manifest_line(const std::vector<std::string>& args) {
    std::string line = "# playtest ";
    line += kToolVersion;
    for (const auto& a : strip_workers(args)) {
        line += ' ';
        line += a;
    }
    return line;
}

// ---- key/value block format ----
//
// Records are separated by blank lines. Within a record each line is
// `key = value`. `#` starts a comment line. Unknown keys, duplicate keys,
// and missing keys are schema errors.

struct KvBlock {
    std::vector<std::pair<std::string, std::string>> entries;
    int first_line = 0;  // 1-based, for error messages

    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : entries)
            if (k == key) return &v;
        return nullptr;
    }
};

inline std::vector<KvBlock> parse_kv_blocks(const std::string& text, const std::string& label) {
    std::vector<KvBlock> blocks;
    KvBlock current;
    auto flush = [&] {
        if (!current.entries.empty()) blocks.push_back(std::move(current));
        current = KvBlock{};
    };
    const auto lines = detail::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const int line_no = static_cast<int>(i) + 1;
        const std::string_view line = detail::trim(lines[i]);
        if (line.empty()) {
            flush();
            continue;
        }
        if (line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(label + ":" + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string value(detail::trim(line.substr(eq + 1)));
        if (key.empty())
            throw ConfigError(label + ":" + std::to_string(line_no) + ": empty key");
        if (current.find(key))
            throw ConfigError(label + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
        if (current.entries.empty()) current.first_line = line_no;
        current.entries.emplace_back(key, value);
    }
    flush();
    return blocks;
}

namespace detail {

inline void check_keys(const KvBlock& block, const std::vector<std::string>& required,
                       const std::string& label) {
    for (const auto& [key, value] : block.entries) {
        bool known = false;
        for (const auto& r : required)
            if (r == key) known = true;
        if (!known)
            throw ConfigError(label + ":" + std::to_string(block.first_line) + ": unknown key '" + key +
                              "'");
    }
    for (const auto& r : required)
        if (!block.find(r))
            throw ConfigError(label + ":" + std::to_string(block.first_line) + ": missing key '" + r +
                              "'");
}

}  // namespace detail

// ---- level packs ----

inline std::string render_level_pack(const std::vector<LevelConfig>& levels,
                                     const std::string& manifest = {}) {
    std::string out;
    if (!manifest.empty()) out += manifest + "\n";
    bool first = true;
    for (const auto& level : levels) {
        if (!first) out += "\n";
        first = false;
        out += "level_id = " + format_int(level.level_id) + "\n";
        out += "width = " + format_int(level.width) + "\n";
        out += "height = " + format_int(level.height) + "\n";
        out += "num_colors = " + format_int(level.num_colors) + "\n";
        out += "goal_count = " + format_int(level.goal_count) + "\n";
        out += "move_budget = " + format_int(level.move_budget) + "\n";
        out += "refill_seed_salt = " + format_u64(level.refill_seed_salt) + "\n";
    }
    return out;
}

inline std::vector<LevelConfig> parse_level_pack(const std::string& text, const std::string& label) {
    static const std::vector<std::string> keys = {"level_id",   "width",       "height",
                                                  "num_colors", "goal_count",  "move_budget",
                                                  "refill_seed_salt"};
    const auto blocks = parse_kv_blocks(text, label);
    if (blocks.empty()) throw ConfigError(label + ": no level records");
    std::vector<LevelConfig> levels;
    for (const auto& block : blocks) {
        detail::check_keys(block, keys, label);
        const std::string ctx = label + ":" + std::to_string(block.first_line);
        LevelConfig level;
        level.level_id = detail::require_int(*block.find("level_id"), ctx + " level_id");
        level.width = detail::require_int(*block.find("width"), ctx + " width");
        level.height = detail::require_int(*block.find("height"), ctx + " height");
        level.num_colors = detail::require_int(*block.find("num_colors"), ctx + " num_colors");
        level.goal_count = detail::require_int(*block.find("goal_count"), ctx + " goal_count");
        level.move_budget = detail::require_int(*block.find("move_budget"), ctx + " move_budget");
        level.refill_seed_salt = detail::require_u64(*block.find("refill_seed_salt"), ctx + " refill_seed_salt");
        validate(level);
        for (const auto& existing : levels)
            if (existing.level_id == level.level_id)
                throw ConfigError(ctx + ": duplicate level_id " + std::to_string(level.level_id));
        levels.push_back(level);
    }
    return levels;
}

inline std::vector<LevelConfig> read_level_pack(const std::string& path) {
    return parse_level_pack(read_text_file(path), path);
}

inline void write_level_pack(const std::string& path, const std::vector<LevelConfig>& levels,
                             const std::string& manifest = {}) {
    write_text_file(path, render_level_pack(levels, manifest));
}

// ---- policy weights ----

inline std::string render_weights(const std::map<int, PolicyWeights>& weights,
                                  const std::string& manifest = {}) {
    std::string out;
    if (!manifest.empty()) out += manifest + "\n";
    bool first = true;
    for (const auto& [id, w] : weights) {
        if (!first) out += "\n";
        first = false;
        out += "level_id = " + format_int(id) + "\n";
        out += "temperature = " + format_double(w.temperature) + "\n";
        out += "training_seed = " + format_u64(w.training_seed) + "\n";
        out += "weights =";
        for (double v : w.weights) out += " " + format_double(v);
        out += "\n";
    }
    return out;
}

inline std::map<int, PolicyWeights> parse_weights(const std::string& text, const std::string& label) {
    static const std::vector<std::string> keys = {"level_id", "temperature", "training_seed", "weights"};
    const auto blocks = parse_kv_blocks(text, label);
    if (blocks.empty()) throw ConfigError(label + ": no weight records");
    std::map<int, PolicyWeights> out;
    for (const auto& block : blocks) {
        detail::check_keys(block, keys, label);
        const std::string ctx = label + ":" + std::to_string(block.first_line);
        PolicyWeights w;
        w.level_id = detail::require_int(*block.find("level_id"), ctx + " level_id");
        w.temperature = detail::require_double(*block.find("temperature"), ctx + " temperature");
        w.training_seed = detail::require_u64(*block.find("training_seed"), ctx + " training_seed");
        std::istringstream fields(*block.find("weights"));
        std::vector<std::string> tokens;
        std::string token;
        while (fields >> token) tokens.push_back(token);
        if (tokens.size() != kNumActionFeatures)
            throw ConfigError(ctx + ": weights needs " + std::to_string(kNumActionFeatures) +
                              " values, got " + std::to_string(tokens.size()));
        for (std::size_t i = 0; i < tokens.size(); ++i)
            w.weights[i] = detail::require_double(tokens[i], ctx + " weights");
        validate(w);
        if (out.count(w.level_id))
            throw ConfigError(ctx + ": duplicate level_id " + std::to_string(w.level_id));
        out[w.level_id] = w;
    }
    return out;
}

inline std::map<int, PolicyWeights> read_weights(const std::string& path) {
    return parse_weights(read_text_file(path), path);
}

inline void write_weights(const std::string& path, const std::map<int, PolicyWeights>& weights,
                          const std::string& manifest = {}) {
    write_text_file(path, render_weights(weights, manifest));
}

// ---- population parameters ----

inline std::string render_params(const PopulationParams& p, const std::string& manifest = {}) {
    std::string out;
    if (!manifest.empty()) out += manifest + "\n";
    out += "skill_alpha = " + format_double(p.skill_alpha) + "\n";
    out += "skill_beta = " + format_double(p.skill_beta) + "\n";
    out += "persistence_alpha = " + format_double(p.persistence_alpha) + "\n";
    out += "persistence_beta = " + format_double(p.persistence_beta) + "\n";
    out += "boredom_alpha = " + format_double(p.boredom_alpha) + "\n";
    out += "boredom_beta = " + format_double(p.boredom_beta) + "\n";
    out += "slope = " + format_double(p.slope) + "\n";
    out += "population_size = " + format_int(p.population_size) + "\n";
    out += "max_attempts = " + format_int(p.max_attempts) + "\n";
    return out;
}

inline PopulationParams parse_params(const std::string& text, const std::string& label) {
    static const std::vector<std::string> keys = {
        "skill_alpha", "skill_beta",  "persistence_alpha", "persistence_beta", "boredom_alpha",
        "boredom_beta", "slope",      "population_size",   "max_attempts"};
    const auto blocks = parse_kv_blocks(text, label);
    if (blocks.size() != 1) throw ConfigError(label + ": expected exactly one parameter record");
    const auto& block = blocks.front();
    detail::check_keys(block, keys, label);
    const std::string ctx = label + ":" + std::to_string(block.first_line);
    PopulationParams p;
    p.skill_alpha = detail::require_double(*block.find("skill_alpha"), ctx + " skill_alpha");
    p.skill_beta = detail::require_double(*block.find("skill_beta"), ctx + " skill_beta");
    p.persistence_alpha = detail::require_double(*block.find("persistence_alpha"), ctx + " persistence_alpha");
    p.persistence_beta = detail::require_double(*block.find("persistence_beta"), ctx + " persistence_beta");
    p.boredom_alpha = detail::require_double(*block.find("boredom_alpha"), ctx + " boredom_alpha");
    p.boredom_beta = detail::require_double(*block.find("boredom_beta"), ctx + " boredom_beta");
    p.slope = detail::require_double(*block.find("slope"), ctx + " slope");
    p.population_size = detail::require_int(*block.find("population_size"), ctx + " population_size");
    p.max_attempts = detail::require_int(*block.find("max_attempts"), ctx + " max_attempts");
    validate(p);
    return p;
}

inline PopulationParams read_params(const std::string& path) {
    return parse_params(read_text_file(path), path);
}

inline void write_params(const std::string& path, const PopulationParams& p,
                         const std::string& manifest = {}) {
    write_text_file(path, render_params(p, manifest));
}

// ---- CSV ----

inline std::string render_csv(const std::vector<std::string>& header,
                              const std::vector<std::vector<std::string>>& rows,
                              const std::string& manifest = {}) {
    std::string out;
    if (!manifest.empty()) out += manifest + "\n";
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) out += ',';
        out += header[c];
    }
    out += '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw ContractViolation("render_csv: row width mismatch");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += row[c];
        }
        out += '\n';
    }
    return out;
}

inline std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                       const std::vector<std::string>& expected_header,
                                                       const std::string& label) {
    const auto lines = detail::split_lines(text);
    std::size_t i = 0;
    while (i < lines.size() && (lines[i].empty() || lines[i][0] == '#')) ++i;
    if (i == lines.size()) throw ConfigError(label + ": missing header row");
    const auto header = detail::split(detail::trim(lines[i]), ',');
    if (header != expected_header) {
        std::string want;
        for (std::size_t c = 0; c < expected_header.size(); ++c)
            want += (c ? "," : "") + expected_header[c];
        throw ConfigError(label + ": header mismatch, expected '" + want + "'");
    }
    ++i;
    std::vector<std::vector<std::string>> rows;
    for (; i < lines.size(); ++i) {
        const std::string_view line = detail::trim(lines[i]);
        if (line.empty()) continue;
        if (line[0] == '#') continue;
        auto fields = detail::split(line, ',');
        if (fields.size() != expected_header.size())
            throw ConfigError(label + ":" + std::to_string(i + 1) + ": expected " +
                              std::to_string(expected_header.size()) + " fields, got " +
                              std::to_string(fields.size()));
        rows.push_back(std::move(fields));
    }
    return rows;
}

// ---- typed CSV artifacts ----

inline const std::vector<std::string>& runs_csv_header() {
    static const std::vector<std::string> h = {"level_id",   "seed",       "agent",
                                               "passed",     "moves_used", "moves_left",
                                               "goals_cleared_fraction"};
    return h;
}

inline std::string render_runs_csv(const std::vector<RunRecord>& records,
                                   const std::string& manifest = {}) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : records)
        rows.push_back({format_int(r.level_id), format_u64(r.seed), r.agent,
                        r.passed ? "1" : "0", format_int(r.moves_used), format_int(r.moves_left),
                        format_double(r.goals_cleared_fraction)});
    return render_csv(runs_csv_header(), rows, manifest);
}

inline std::vector<RunRecord> parse_runs_csv(const std::string& text, const std::string& label) {
    std::vector<RunRecord> records;
    for (const auto& row : parse_csv(text, runs_csv_header(), label)) {
        RunRecord r;
        r.level_id = detail::require_int(row[0], label + " level_id");
        r.seed = detail::require_u64(row[1], label + " seed");
        r.agent = row[2];
        if (!parse_agent(r.agent)) throw ConfigError(label + ": unknown agent '" + r.agent + "'");
        if (row[3] != "0" && row[3] != "1")
            throw ConfigError(label + ": passed must be 0 or 1, got '" + row[3] + "'");
        r.passed = row[3] == "1";
        r.moves_used = detail::require_int(row[4], label + " moves_used");
        r.moves_left = detail::require_int(row[5], label + " moves_left");
        r.goals_cleared_fraction = detail::require_double(row[6], label + " goals_cleared_fraction");
        if (r.moves_used < 0 || r.moves_left < 0)
            throw ConfigError(label + ": negative move count");
        if (r.goals_cleared_fraction < 0.0 || r.goals_cleared_fraction > 1.0)
            throw ConfigError(label + ": goals_cleared_fraction outside [0, 1]");
        records.push_back(std::move(r));
    }
    if (records.empty()) throw ConfigError(label + ": no run rows");
    return records;
}

inline std::vector<RunRecord> read_runs_csv(const std::string& path) {
    return parse_runs_csv(read_text_file(path), path);
}

inline void write_runs_csv(const std::string& path, const std::vector<RunRecord>& records,
                           const std::string& manifest = {}) {
    write_text_file(path, render_runs_csv(records, manifest));
}

inline const std::vector<std::string>& truth_csv_header() {
    static const std::vector<std::string> h = {"level_id", "pass_rate", "churn_rate"};
    return h;
}

inline std::string render_truth_csv(const std::vector<GroundTruthRecord>& truth,
                                    const std::string& manifest = {}) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& t : truth)
        rows.push_back({format_int(t.level_id), format_double(t.pass_rate), format_double(t.churn_rate)});
    return render_csv(truth_csv_header(), rows, manifest);
}

inline std::vector<GroundTruthRecord> parse_truth_csv(const std::string& text, const std::string& label) {
    std::vector<GroundTruthRecord> truth;
    for (const auto& row : parse_csv(text, truth_csv_header(), label)) {
        GroundTruthRecord t;
        t.level_id = detail::require_int(row[0], label + " level_id");
        t.pass_rate = detail::require_double(row[1], label + " pass_rate");
        t.churn_rate = detail::require_double(row[2], label + " churn_rate");
        if (t.pass_rate < 0.0 || t.pass_rate > 1.0 || t.churn_rate < 0.0 || t.churn_rate > 1.0)
            throw ConfigError(label + ": rates must lie in [0, 1]");
        for (const auto& existing : truth)
            if (existing.level_id == t.level_id)
                throw ConfigError(label + ": duplicate level_id " + std::to_string(t.level_id));
        truth.push_back(t);
    }
    if (truth.empty()) throw ConfigError(label + ": no truth rows");
    return truth;
}

inline std::vector<GroundTruthRecord> read_truth_csv(const std::string& path) {
    return parse_truth_csv(read_text_file(path), path);
}

inline void write_truth_csv(const std::string& path, const std::vector<GroundTruthRecord>& truth,
                            const std::string& manifest = {}) {
    write_text_file(path, render_truth_csv(truth, manifest));
}

inline const std::vector<std::string>& sweep_csv_header() {
    static const std::vector<std::string> h = {"fraction", "feature", "rho"};
    return h;
}

// Cells whose correlation is undefined get an empty rho field.
inline std::string render_sweep_csv(const std::vector<SweepCell>& cells,
                                    const std::string& manifest = {}) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& cell : cells)
        rows.push_back({format_double(cell.fraction), cell.feature,
                        cell.rho ? format_double(*cell.rho) : std::string()});
    return render_csv(sweep_csv_header(), rows, manifest);
}

inline std::vector<SweepCell> parse_sweep_csv(const std::string& text, const std::string& label) {
    std::vector<SweepCell> cells;
    for (const auto& row : parse_csv(text, sweep_csv_header(), label)) {
        SweepCell cell;
        cell.fraction = detail::require_double(row[0], label + " fraction");
        cell.feature = row[1];
        if (!detail::trim(row[2]).empty())
            cell.rho = detail::require_double(row[2], label + " rho");
        cells.push_back(std::move(cell));
    }
    return cells;
}

inline void write_sweep_csv(const std::string& path, const std::vector<SweepCell>& cells,
                            const std::string& manifest = {}) {
    write_text_file(path, render_sweep_csv(cells, manifest));
}

struct PredictionRow {
    int level_id = 0;
    double pass_pred = 0.0;
    double churn_pred = 0.0;
    double pass_true = 0.0;
    double churn_true = 0.0;
};

inline const std::vector<std::string>& predictions_csv_header() {
    static const std::vector<std::string> h = {"level_id", "pass_pred", "churn_pred", "pass_true",
                                               "churn_true"};
    return h;
}

inline std::string render_predictions_csv(const std::vector<PredictionRow>& rows_in,
                                          const std::string& manifest = {}) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : rows_in)
        rows.push_back({format_int(r.level_id), format_double(r.pass_pred), format_double(r.churn_pred),
                        format_double(r.pass_true), format_double(r.churn_true)});
    return render_csv(predictions_csv_header(), rows, manifest);
}

inline std::vector<PredictionRow> parse_predictions_csv(const std::string& text,
                                                        const std::string& label) {
    std::vector<PredictionRow> rows;
    for (const auto& row : parse_csv(text, predictions_csv_header(), label)) {
        PredictionRow r;
        r.level_id = detail::require_int(row[0], label + " level_id");
        r.pass_pred = detail::require_double(row[1], label + " pass_pred");
        r.churn_pred = detail::require_double(row[2], label + " churn_pred");
        r.pass_true = detail::require_double(row[3], label + " pass_true");
        r.churn_true = detail::require_double(row[4], label + " churn_true");
        rows.push_back(r);
    }
    return rows;
}

inline void write_predictions_csv(const std::string& path, const std::vector<PredictionRow>& rows,
                                  const std::string& manifest = {}) {
    write_text_file(path, render_predictions_csv(rows, manifest));
}

inline const std::vector<std::string>& report_csv_header() {
    static const std::vector<std::string> h = {"predictor",     "agent",        "feature_set",
                                               "pass_mse_mean", "pass_mse_std", "churn_mse_mean",
                                               "churn_mse_std"};
    return h;
}

inline std::string render_report_csv(const std::vector<SummaryReport>& reports,
                                     const std::string& manifest = {}) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : reports)
        rows.push_back({r.predictor, r.agent, r.feature_set, format_double(r.pass_mse_mean),
                        format_double(r.pass_mse_std), format_double(r.churn_mse_mean),
                        format_double(r.churn_mse_std)});
    return render_csv(report_csv_header(), rows, manifest);
}

inline void write_report_csv(const std::string& path, const std::vector<SummaryReport>& reports,
                             const std::string& manifest = {}) {
    write_text_file(path, render_report_csv(reports, manifest));
}

inline const std::vector<std::string>& report_folds_csv_header() {
    static const std::vector<std::string> h = {"predictor", "agent",    "feature_set", "fold",
                                               "pass_mse",  "churn_mse"};
    return h;
}

inline std::string render_report_folds_csv(const std::vector<SummaryReport>& reports,
                                           const std::string& manifest = {}) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : reports)
        for (std::size_t f = 0; f < r.folds.size(); ++f)
            rows.push_back({r.predictor, r.agent, r.feature_set, format_int(static_cast<long long>(f)),
                            format_double(r.folds[f].pass_mse), format_double(r.folds[f].churn_mse)});
    return render_csv(report_folds_csv_header(), rows, manifest);
}

inline void write_report_folds_csv(const std::string& path, const std::vector<SummaryReport>& reports,
                                   const std::string& manifest = {}) {
    write_text_file(path, render_report_folds_csv(reports, manifest));
}

}  // namespace playtest
