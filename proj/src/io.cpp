#include "partialrank/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "json.hpp"

#include "partialrank/errors.hpp"

namespace partialrank {

using ordered_json = nlohmann::ordered_json;

std::string_view level_name(Level level) { return level == Level::task ? "task" : "instance"; }

Level parse_level(std::string_view name) {
    if (name == "task") return Level::task;
    if (name == "instance") return Level::instance;
    throw ValidationError("unknown level '" + std::string(name) + "' (expected task or instance)");
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

/// Splits one CSV record. Double quotes delimit fields and `""` escapes a quote.
std::vector<std::string> split_csv(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
            was_quoted = true;
        } else if (ch == ',') {
            fields.push_back(was_quoted ? cur : trim(cur));
            cur.clear();
            was_quoted = false;
        } else {
            cur.push_back(ch);
        }
    }
    if (quoted) throw ParseError("unterminated quoted field", line_no);
    fields.push_back(was_quoted ? cur : trim(cur));
    return fields;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos && trim(s) == s) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

double parse_score(const std::string& field, std::size_t line_no) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (field.empty() || ec != std::errc() || ptr != last) {
        throw ParseError("non-numeric score '" + field + "'", line_no);
    }
    if (!std::isfinite(value)) throw ParseError("non-finite score '" + field + "'", line_no);
    return value;
}

/// Reads records, skipping blank lines. Returns false at end of input.
bool next_record(std::istream& in, std::size_t& line_no, std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        fields = split_csv(line, line_no);
        return true;
    }
    return false;
}

class Interner {
public:
    std::size_t intern(const std::string& name) {
        auto [it, inserted] = ids_.try_emplace(name, names_.size());
        if (inserted) names_.push_back(name);
        return it->second;
    }
    /// False when the name was already known.
    bool insert(const std::string& name) {
        const std::size_t before = names_.size();
        intern(name);
        return names_.size() != before;
    }
    std::size_t size() const { return names_.size(); }
    std::vector<std::string> take() { return std::move(names_); }

private:
    std::unordered_map<std::string, std::size_t> ids_;
    std::vector<std::string> names_;
};

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open input file '" + path.string() + "'");
    return in;
}

}  // namespace

LabeledData parse_long_csv(std::istream& in, Level level) {
    const bool inst = level == Level::instance;
    std::size_t line_no = 0;
    std::vector<std::string> fields;
    if (!next_record(in, line_no, fields)) throw ParseError("empty input, expected a header", 1);
    std::vector<std::string> expected = inst ? std::vector<std::string>{"system", "task", "instance", "score"}
                                             : std::vector<std::string>{"system", "task", "score"};
    std::vector<std::string> header;
    for (auto& f : fields) header.push_back(lower(f));
    if (header != expected) {
        std::string want;
        for (const auto& e : expected) want += (want.empty() ? "" : ",") + e;
        throw ParseError("expected header '" + want + "'", line_no);
    }

    struct Row {
        std::size_t system, task, instance;
        std::optional<double> score;
    };
    std::vector<Row> rows;
    Interner systems, tasks;
    std::vector<Interner> instances;
    std::unordered_map<std::string, std::size_t> first_line;  // cell key -> line

    while (next_record(in, line_no, fields)) {
        if (fields.size() != expected.size()) {
            throw ParseError("expected " + std::to_string(expected.size()) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        for (std::size_t f = 0; f + 1 < fields.size(); ++f) {
            if (fields[f].empty()) throw ParseError("empty " + expected[f] + " name", line_no);
        }
        // An empty score declares the names without giving a value.
        const std::optional<double> score =
            trim(fields.back()).empty() ? std::nullopt : std::optional<double>(parse_score(fields.back(), line_no));
        std::string key = fields[0] + '\x1f' + fields[1] + (inst ? '\x1f' + fields[2] : std::string());
        auto [it, fresh] = first_line.try_emplace(std::move(key), line_no);
        if (!fresh) {
            throw ParseError("duplicate cell (" + fields[0] + ", " + fields[1] + (inst ? ", " + fields[2] : "") +
                                 "), first given on line " + std::to_string(it->second),
                             line_no);
        }
        Row row{systems.intern(fields[0]), tasks.intern(fields[1]), 0, score};
        if (inst) {
            if (instances.size() < tasks.size()) instances.resize(tasks.size());
            row.instance = instances[row.task].intern(fields[2]);
        }
        rows.push_back(row);
    }

    LabeledData out;
    if (inst) {
        instances.resize(tasks.size());
        std::vector<std::size_t> k(tasks.size());
        for (std::size_t t = 0; t < tasks.size(); ++t) k[t] = instances[t].size();
        ScoreTensor tensor(systems.size(), std::move(k));
        for (const auto& r : rows)
            if (r.score) tensor.set(r.system, r.task, r.instance, *r.score);
        out.data = std::move(tensor);
        for (auto& i : instances) out.instances.push_back(i.take());
    } else {
        ScoreTable table(systems.size(), tasks.size());
        for (const auto& r : rows)
            if (r.score) table.set(r.system, r.task, *r.score);
        out.data = std::move(table);
    }
    out.systems = systems.take();
    out.tasks = tasks.take();
    return out;
}

LabeledData parse_long_csv(const std::filesystem::path& path, Level level) {
    auto in = open_input(path);
    return parse_long_csv(in, level);
}

LabeledData parse_wide_matrix(std::istream& in) {
    std::size_t line_no = 0;
    std::vector<std::string> header;
    if (!next_record(in, line_no, header)) throw ParseError("empty input, expected a header", 1);
    if (header.size() < 2) throw ParseError("header needs a system column and at least one task", line_no);
    std::vector<std::string> task_names(header.begin() + 1, header.end());
    {
        Interner check;
        for (const auto& t : task_names) {
            if (t.empty()) throw ParseError("empty task name in header", line_no);
            if (!check.insert(t)) throw ParseError("duplicate task '" + t + "'", line_no);
        }
    }

    std::vector<std::string> names;
    std::vector<std::vector<std::optional<double>>> cells;
    Interner seen;
    std::vector<std::string> fields;
    while (next_record(in, line_no, fields)) {
        if (fields.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        if (fields[0].empty()) throw ParseError("empty system name", line_no);
        if (!seen.insert(fields[0])) throw ParseError("duplicate system '" + fields[0] + "'", line_no);
        names.push_back(fields[0]);
        std::vector<std::optional<double>> row;
        for (std::size_t f = 1; f < fields.size(); ++f) {
            const std::string& v = fields[f];
            if (v.empty() || v == "X" || v == "x") {
                row.emplace_back();
            } else {
                row.emplace_back(parse_score(v, line_no));
            }
        }
        cells.push_back(std::move(row));
    }

    ScoreTable table(names.size(), task_names.size());
    for (std::size_t n = 0; n < cells.size(); ++n)
        for (std::size_t t = 0; t < task_names.size(); ++t)
            if (cells[n][t]) table.set(n, t, *cells[n][t]);

    LabeledData out;
    out.data = std::move(table);
    out.systems = std::move(names);
    out.tasks = std::move(task_names);
    return out;
}

LabeledData parse_wide_matrix(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_wide_matrix(in);
}

// ---------------------------------------------------------------------------

namespace {

struct Cell {
    std::size_t system, task, instance;
    bool declared_only = false;  ///< absent cell written with an empty score
};

// Orders cells so that systems, tasks and each task's instances first appear
// in id order. Systems and (task, instance) units are introduced one at a
// time; a unit is admissible when it is the next instance of a known task or
// the first instance of the next task. When no present cell can introduce the
// next name, an absent cell is written with an empty score to declare it.
std::vector<Cell> emission_order(const LabeledData& data) {
    const bool inst = data.level() == Level::instance;
    const std::size_t n_sys = inst ? data.tensor().systems() : data.table().systems();
    const std::size_t n_tasks = inst ? data.tensor().tasks() : data.table().tasks();
    std::vector<std::size_t> k_of(n_tasks, 1);
    if (inst) k_of = data.tensor().instance_counts();
    std::vector<std::size_t> unit_base(n_tasks + 1, 0);
    for (std::size_t t = 0; t < n_tasks; ++t) unit_base[t + 1] = unit_base[t] + k_of[t];
    const std::size_t n_units = unit_base[n_tasks];

    auto present = [&](std::size_t n, std::size_t t, std::size_t k) {
        return inst ? data.tensor().has(n, t, k) : data.table().has(n, t);
    };

    std::vector<std::size_t> min_sys(n_units, n_sys);
    for (std::size_t t = 0; t < n_tasks; ++t)
        for (std::size_t k = 0; k < k_of[t]; ++k)
            for (std::size_t n = 0; n < n_sys; ++n)
                if (present(n, t, k)) {
                    min_sys[unit_base[t] + k] = n;
                    break;
                }

    std::vector<Cell> out;
    std::vector<std::uint8_t> emitted(n_sys * n_units, 0);
    auto emit = [&](std::size_t n, std::size_t t, std::size_t k) {
        auto& e = emitted[(unit_base[t] + k) * n_sys + n];
        if (!e && present(n, t, k)) {
            e = 1;
            out.push_back({n, t, k});
        }
    };
    auto declare = [&](std::size_t n, std::size_t t, std::size_t k) {
        emitted[(unit_base[t] + k) * n_sys + n] = 1;
        out.push_back({n, t, k, true});
    };

    std::size_t next_sys = 0, next_task = 0;
    std::vector<std::size_t> next_inst(n_tasks, 0);
    std::vector<std::pair<std::size_t, std::size_t>> known_units;
    std::vector<std::size_t> hits(n_sys, 0);  // present cells of a system in known units

    auto introduce_unit = [&](std::size_t t, std::size_t k) {
        for (std::size_t n = 0; n < next_sys; ++n) emit(n, t, k);
        for (std::size_t n = next_sys; n < n_sys; ++n)
            if (present(n, t, k)) ++hits[n];
        known_units.emplace_back(t, k);
        if (t == next_task) ++next_task;
        next_inst[t] = k + 1;
    };
    auto introduce_system = [&]() {
        const std::size_t n = next_sys++;
        for (auto [t, k] : known_units) emit(n, t, k);
    };
    auto candidates = [&]() {
        std::vector<std::pair<std::size_t, std::size_t>> c;
        for (std::size_t t = 0; t < next_task; ++t)
            if (next_inst[t] < k_of[t]) c.emplace_back(t, next_inst[t]);
        if (next_task < n_tasks && k_of[next_task] > 0) c.emplace_back(next_task, 0);
        return c;
    };

    while (next_sys < n_sys || known_units.size() < n_units) {
        if (next_sys < n_sys && hits[next_sys] > 0) {
            introduce_system();
            continue;
        }
        const auto cand = candidates();
        bool progressed = false;
        for (auto [t, k] : cand) {
            if (min_sys[unit_base[t] + k] < next_sys) {
                introduce_unit(t, k);
                progressed = true;
                break;
            }
        }
        if (progressed) continue;
        if (next_sys < n_sys) {
            for (auto [t, k] : cand) {
                if (present(next_sys, t, k)) {
                    emit(next_sys, t, k);
                    introduce_unit(t, k);
                    introduce_system();
                    progressed = true;
                    break;
                }
            }
        }
        if (progressed) continue;

        // Stuck: declare the next name through an absent cell.
        if (next_sys < n_sys && !known_units.empty()) {
            const auto [t, k] = known_units.front();
            declare(next_sys, t, k);
            introduce_system();
        } else if (!cand.empty() && next_sys > 0) {
            const auto [t, k] = cand.front();
            declare(0, t, k);
            introduce_unit(t, k);
        } else if (!cand.empty() && next_sys < n_sys) {
            const auto [t, k] = cand.front();
            declare(next_sys, t, k);
            introduce_unit(t, k);
            introduce_system();
        } else {
            break;  // no tasks or no systems: nothing can be written
        }
    }
    return out;
}

}  // namespace

void write_long_csv(std::ostream& out, const LabeledData& data) {
    const bool inst = data.level() == Level::instance;
    out << (inst ? "system,task,instance,score\n" : "system,task,score\n");
    for (const auto& c : emission_order(data)) {
        out << csv_field(data.systems[c.system]) << ',' << csv_field(data.tasks[c.task]) << ',';
        if (inst) out << csv_field(data.instances[c.task][c.instance]) << ',';
        if (!c.declared_only) {
            out << format_double(inst ? *data.tensor().get(c.system, c.task, c.instance)
                                      : *data.table().get(c.system, c.task));
        }
        out << '\n';
    }
}

LabeledData label_synthetic(Dataset data) {
    LabeledData out;
    const std::size_t n_sys = std::visit([](const auto& d) { return d.systems(); }, data);
    const std::size_t n_tasks = std::visit([](const auto& d) { return d.tasks(); }, data);
    for (std::size_t n = 0; n < n_sys; ++n) out.systems.push_back("s" + std::to_string(n));
    for (std::size_t t = 0; t < n_tasks; ++t) out.tasks.push_back("t" + std::to_string(t));
    if (const auto* tensor = std::get_if<ScoreTensor>(&data)) {
        for (std::size_t t = 0; t < n_tasks; ++t) {
            std::vector<std::string> names;
            for (std::size_t k = 0; k < tensor->instances(t); ++k) names.push_back(std::to_string(k));
            out.instances.push_back(std::move(names));
        }
    }
    out.data = std::move(data);
    return out;
}

std::size_t find_task(const LabeledData& data, std::string_view name_or_index) {
    for (std::size_t t = 0; t < data.tasks.size(); ++t)
        if (data.tasks[t] == name_or_index) return t;
    std::size_t idx = 0;
    const auto [ptr, ec] = std::from_chars(name_or_index.data(), name_or_index.data() + name_or_index.size(), idx);
    if (ec == std::errc() && ptr == name_or_index.data() + name_or_index.size() && idx < data.tasks.size()) return idx;
    throw ValidationError("unknown task '" + std::string(name_or_index) + "'");
}

void negate_tasks(LabeledData& data, const std::vector<std::string>& task_names) {
    std::vector<std::size_t> targets;
    for (const auto& name : task_names) {
        auto it = std::find(data.tasks.begin(), data.tasks.end(), name);
        if (it == data.tasks.end()) throw ValidationError("--negate-metrics: unknown task '" + name + "'");
        targets.push_back(static_cast<std::size_t>(it - data.tasks.begin()));
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (auto t : targets) {
        if (auto* table = std::get_if<ScoreTable>(&data.data)) {
            for (std::size_t n = 0; n < table->systems(); ++n)
                if (auto s = table->get(n, t)) table->set(n, t, -*s);
        } else {
            auto& tensor = std::get<ScoreTensor>(data.data);
            for (std::size_t k = 0; k < tensor.instances(t); ++k)
                for (std::size_t n = 0; n < tensor.systems(); ++n)
                    if (auto s = tensor.get(n, t, k)) tensor.set(n, t, k, -*s);
        }
    }
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw InvariantError("format_double: buffer too small");
    return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------

namespace {

ordered_json nullable(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

}  // namespace

std::string ranking_json(const AggregationResult& result, Method method, const LabeledData& data) {
    ordered_json j;
    j["method"] = method_name(method);
    j["level"] = level_name(data.level());
    j["ordering"] = result.ranking.ordering();
    j["system_names"] = data.systems;
    if (result.kind == ScoreKind::mean) {
        j["borda_scores"] = nullptr;
    } else {
        j["borda_scores"] = result.scores;
    }
    j["unobserved_systems"] = result.unobserved;
    return j.dump() + "\n";
}

void write_ranking_csv(std::ostream& out, const AggregationResult& result, const LabeledData& data) {
    out << "position,system,score\n";
    for (std::size_t p = 0; p < result.ranking.size(); ++p) {
        const SystemId id = result.ranking.at(p);
        const double s = result.scores.at(id);
        out << p << ',' << csv_field(data.systems.at(id)) << ',' << (std::isnan(s) ? "" : format_double(s)) << '\n';
    }
}

void write_confidence_csv(std::ostream& out, const ConfidenceReport& report, const Ranking& order,
                          const LabeledData& data) {
    out << "i,j,m_hat,z,c,verdict,margin\n";
    for (std::size_t a = 0; a < order.size(); ++a) {
        for (std::size_t b = a + 1; b < order.size(); ++b) {
            const auto p = report.pair(order.at(a), order.at(b));
            out << csv_field(data.systems.at(p.i)) << ',' << csv_field(data.systems.at(p.j)) << ','
                << (p.m_hat ? format_double(*p.m_hat) : "") << ',' << p.z << ','
                << (p.c ? format_double(*p.c) : "") << ',' << verdict_name(p.verdict) << ','
                << format_double(p.margin()) << '\n';
        }
    }
}

void write_heatmap_csv(std::ostream& out, const std::vector<std::vector<double>>& heatmap, const Ranking& order,
                       const LabeledData& data) {
    out << "system";
    for (auto id : order.ordering()) out << ',' << csv_field(data.systems.at(id));
    out << '\n';
    for (std::size_t a = 0; a < heatmap.size(); ++a) {
        out << csv_field(data.systems.at(order.at(a)));
        for (double v : heatmap[a]) out << ',' << format_double(v);
        out << '\n';
    }
}

std::string confidence_json(const ConfidenceReport& report, const Ranking& order, const LabeledData& data,
                            HoeffdingConstant constant) {
    ordered_json j;
    j["delta"] = report.delta();
    j["constant"] = constant == HoeffdingConstant::two_sided ? "two-sided" : "log-inv-delta";
    j["ordering"] = order.ordering();
    j["system_names"] = data.systems;
    ordered_json pairs = ordered_json::array();
    for (std::size_t a = 0; a < order.size(); ++a) {
        for (std::size_t b = a + 1; b < order.size(); ++b) {
            const auto p = report.pair(order.at(a), order.at(b));
            ordered_json row;
            row["i"] = p.i;
            row["j"] = p.j;
            row["m_hat"] = nullable(p.m_hat);
            row["z"] = p.z;
            row["c"] = nullable(p.c);
            row["verdict"] = verdict_name(p.verdict);
            row["margin"] = p.margin();
            pairs.push_back(std::move(row));
        }
    }
    j["pairs"] = std::move(pairs);
    j["heatmap"] = significance_heatmap(report, order);
    return j.dump() + "\n";
}

void write_robustness_csv(std::ostream& out, const RobustnessResult& result) {
    out << "eta,repeat,method,tau\n";
    for (const auto& s : result.samples) {
        out << format_double(s.eta) << ',' << s.repeat << ',' << method_name(s.method) << ',' << format_double(s.tau)
            << '\n';
    }
}

std::string robustness_json(const RobustnessResult& result) {
    ordered_json j;
    j["samples"] = ordered_json::array();
    for (const auto& s : result.samples) {
        j["samples"].push_back({{"eta", s.eta}, {"repeat", s.repeat}, {"method", method_name(s.method)}, {"tau", s.tau}});
    }
    j["summary"] = ordered_json::array();
    for (const auto& s : result.summary) {
        j["summary"].push_back({{"eta", s.eta},
                                {"method", method_name(s.method)},
                                {"mean_tau", s.mean},
                                {"std_tau", s.stddev},
                                {"repeats", s.count}});
    }
    return j.dump() + "\n";
}

void write_agreement_csv(std::ostream& out, const AgreementResult& result) {
    out << "eta,repeat,method_a,method_b,tau,top1_same,top3_same\n";
    for (const auto& s : result.samples) {
        out << format_double(s.eta) << ',' << s.repeat << ',' << method_name(s.method_a) << ','
            << method_name(s.method_b) << ',' << format_double(s.tau) << ',' << (s.top1_same ? 1 : 0) << ','
            << (s.top3_same ? 1 : 0) << '\n';
    }
}

std::string agreement_json(const AgreementResult& result) {
    ordered_json j;
    j["samples"] = ordered_json::array();
    for (const auto& s : result.samples) {
        j["samples"].push_back({{"eta", s.eta},
                                {"repeat", s.repeat},
                                {"method_a", method_name(s.method_a)},
                                {"method_b", method_name(s.method_b)},
                                {"tau", s.tau},
                                {"top1_same", s.top1_same},
                                {"top3_same", s.top3_same}});
    }
    j["summary"] = ordered_json::array();
    for (const auto& s : result.summary) {
        j["summary"].push_back({{"eta", s.eta},
                                {"method_a", method_name(s.method_a)},
                                {"method_b", method_name(s.method_b)},
                                {"mean_tau", s.mean_tau},
                                {"top1_rate", s.top1_rate},
                                {"top3_rate", s.top3_rate},
                                {"repeats", s.count}});
    }
    return j.dump() + "\n";
}

}  // namespace partialrank
