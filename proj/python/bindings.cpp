#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "partialrank/aggregation.hpp"
#include "partialrank/cli.hpp"
#include "partialrank/combinatorics.hpp"
#include "partialrank/confidence.hpp"
#include "partialrank/errors.hpp"
#include "partialrank/evaluation.hpp"
#include "partialrank/io.hpp"
#include "partialrank/pairwise.hpp"
#include "partialrank/synthetic.hpp"

namespace py = pybind11;
using namespace partialrank;

namespace {

py::object to_int(const BigInt& v) {
    return py::reinterpret_steal<py::object>(PyLong_FromString(v.str().c_str(), nullptr, 10));
}

py::object to_fraction(const Rational& v) {
    static py::object fraction = py::module_::import("fractions").attr("Fraction");
    return fraction(to_int(boost::multiprecision::numerator(v)), to_int(boost::multiprecision::denominator(v)));
}

template <typename T, typename F>
py::list matrix_rows(const BasicPairwiseMatrix<T>& m, F convert) {
    py::list rows;
    for (std::size_t i = 0; i < m.size(); ++i) {
        py::list row;
        for (std::size_t j = 0; j < m.size(); ++j) row.append(convert(m(i, j)));
        rows.append(row);
    }
    return rows;
}

ScoreTable table_from_rows(const std::vector<std::vector<std::optional<double>>>& rows) {
    const std::size_t tasks = rows.empty() ? 0 : rows.front().size();
    ScoreTable t(rows.size(), tasks);
    for (std::size_t s = 0; s < rows.size(); ++s) {
        if (rows[s].size() != tasks) throw ValidationError("rows must have equal length");
        for (std::size_t k = 0; k < tasks; ++k)
            if (rows[s][k]) t.set(s, k, *rows[s][k]);
    }
    return t;
}

std::vector<std::vector<std::optional<double>>> table_rows(const ScoreTable& t) {
    std::vector<std::vector<std::optional<double>>> rows(t.systems());
    for (std::size_t s = 0; s < t.systems(); ++s)
        for (std::size_t k = 0; k < t.tasks(); ++k) rows[s].push_back(t.get(s, k));
    return rows;
}

TieBreak tie_from(const std::optional<std::vector<SystemId>>& priority) {
    return priority ? TieBreak(*priority) : TieBreak();
}

ExperimentOptions experiment_options(const std::vector<std::string>& methods, const std::vector<double>& etas,
                                     std::size_t repeats, std::uint64_t seed, bool random_tie_break,
                                     std::optional<std::size_t> scale_task, double lambda_scale,
                                     std::size_t threads) {
    ExperimentOptions o;
    for (const auto& m : methods) o.methods.push_back(parse_method(m));
    o.etas = etas;
    o.repeats = repeats;
    o.base_seed = seed;
    o.random_tie_break = random_tie_break;
    o.scale_task = scale_task;
    o.lambda_scale = lambda_scale;
    o.threads = threads;
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Ranking systems from incomplete benchmark scores";

    auto validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", validation.ptr());
    py::register_exception<GuardError>(m, "GuardError", PyExc_ValueError);

    py::class_<PartialRanking>(m, "PartialRanking")
        .def(py::init<std::size_t, std::vector<SystemId>>(), py::arg("universe_size"), py::arg("ordered"))
        .def_property_readonly("universe_size", &PartialRanking::universe_size)
        .def_property_readonly("ordered", &PartialRanking::ordered)
        .def_property_readonly("complete", &PartialRanking::complete)
        .def("position_of", &PartialRanking::position_of)
        .def(py::self == py::self)
        .def("__repr__", [](const PartialRanking& p) {
            return "PartialRanking(" + std::to_string(p.universe_size()) + ", " +
                   py::repr(py::cast(p.ordered())).cast<std::string>() + ")";
        });

    py::class_<Ranking>(m, "Ranking")
        .def(py::init<std::vector<SystemId>>(), py::arg("ordering"))
        .def_property_readonly("ordering", &Ranking::ordering)
        .def_property_readonly("ranks", &Ranking::ranks)
        .def("rank_of", &Ranking::rank_of)
        .def("__len__", &Ranking::size)
        .def(py::self == py::self)
        .def("__repr__", [](const Ranking& r) {
            return "Ranking(" + py::repr(py::cast(r.ordering())).cast<std::string>() + ")";
        });

    py::class_<ScoreTable>(m, "ScoreTable")
        .def(py::init<std::size_t, std::size_t>(), py::arg("systems"), py::arg("tasks"))
        .def(py::init(&table_from_rows), py::arg("rows"), "Rows are systems; None marks a missing score.")
        .def_property_readonly("systems", &ScoreTable::systems)
        .def_property_readonly("tasks", &ScoreTable::tasks)
        .def("get", &ScoreTable::get)
        .def("set", &ScoreTable::set)
        .def("clear", &ScoreTable::clear)
        .def("present_count", &ScoreTable::present_count)
        .def("to_rows", &table_rows)
        .def(py::self == py::self);

    py::class_<ScoreTensor>(m, "ScoreTensor")
        .def(py::init<std::size_t, std::vector<std::size_t>>(), py::arg("systems"), py::arg("instances_per_task"))
        .def_static("from_table", &ScoreTensor::from_table)
        .def_property_readonly("systems", &ScoreTensor::systems)
        .def_property_readonly("tasks", &ScoreTensor::tasks)
        .def_property_readonly("instance_counts", &ScoreTensor::instance_counts)
        .def("get", &ScoreTensor::get)
        .def("set", &ScoreTensor::set)
        .def("clear", &ScoreTensor::clear)
        .def(py::self == py::self);

    py::class_<AccumulatedMatrix>(m, "AccumulatedMatrix")
        .def(py::init<std::size_t>(), py::arg("n"))
        .def_property_readonly("size", &AccumulatedMatrix::size)
        .def_property_readonly("units", &AccumulatedMatrix::units)
        .def("add", &AccumulatedMatrix::add)
        .def("merge", &AccumulatedMatrix::merge)
        .def("sum", &AccumulatedMatrix::sum)
        .def("direct_wins", &AccumulatedMatrix::direct_wins)
        .def("direct_count", &AccumulatedMatrix::direct_count)
        .def("borda_scores", &AccumulatedMatrix::borda_scores)
        .def("borda_score_exact", [](const AccumulatedMatrix& a, std::size_t i) {
            return to_fraction(a.borda_score_exact(i));
        });

    py::enum_<ScoreKind>(m, "ScoreKind")
        .value("borda_wins", ScoreKind::borda_wins)
        .value("rank_sum", ScoreKind::rank_sum)
        .value("mean", ScoreKind::mean);

    py::class_<AggregationResult>(m, "AggregationResult")
        .def_readonly("ranking", &AggregationResult::ranking)
        .def_readonly("kind", &AggregationResult::kind)
        .def_readonly("scores", &AggregationResult::scores)
        .def_readonly("unobserved", &AggregationResult::unobserved)
        .def_property_readonly("ordering", [](const AggregationResult& r) { return r.ranking.ordering(); });

    // Combinatorics.
    m.def("factorial", [](std::size_t n) { return to_int(factorial(n)); });
    m.def("shuffle_count", [](std::size_t a, std::size_t b) { return to_int(shuffle_count(a, b)); });
    m.def("variation_count", [](std::size_t a, std::size_t b) { return to_int(variation_count(a, b)); });
    m.def("total_compatible", [](std::size_t n, std::size_t k) { return to_int(total_compatible(n, k)); },
          py::arg("n"), py::arg("k"));
    m.def("p_unobserved_beats_observed", &p_unobserved_beats_observed, py::arg("n"), py::arg("k"), py::arg("r"));
    m.def("p_exact", [](std::size_t n, std::size_t k, std::size_t r) { return to_fraction(p_gap_identity(n, k, r)); },
          py::arg("n"), py::arg("k"), py::arg("r"));
    m.def("enumerate_compatible", &enumerate_compatible);
    m.def("sample_compatible", py::overload_cast<const PartialRanking&, std::uint64_t>(&sample_compatible),
          py::arg("partial"), py::arg("seed"));

    // Pairwise matrices.
    m.def("matrix_from_partial", [](const PartialRanking& pr) {
        return matrix_rows(matrix_from_partial(pr), [](double v) { return py::float_(v); });
    });
    m.def("matrix_from_partial_exact", [](const PartialRanking& pr) {
        return matrix_rows(matrix_from_partial_exact(pr), [](const Rational& v) { return to_fraction(v); });
    });
    m.def(
        "partial_from_scores",
        [](const std::vector<std::optional<double>>& scores) { return partial_from_scores(scores, scores.size()); },
        py::arg("scores"));
    m.def("accumulate_tasks", &accumulate_tasks);
    m.def("accumulate_instances", &accumulate_instances);

    // Aggregation.
    m.def(
        "aggregate",
        [](const std::string& method, const Dataset& data, std::optional<std::vector<SystemId>> priority) {
            return aggregate(parse_method(method), data, tie_from(priority));
        },
        py::arg("method"), py::arg("data"), py::arg("tie_priority") = py::none());
    m.def(
        "borda_on_rankings",
        [](const std::vector<Ranking>& rankings, std::optional<std::vector<SystemId>> priority) {
            return borda_on_rankings(rankings, tie_from(priority));
        },
        py::arg("rankings"), py::arg("tie_priority") = py::none());

    // Confidence.
    py::class_<PairConfidence>(m, "PairConfidence")
        .def_readonly("i", &PairConfidence::i)
        .def_readonly("j", &PairConfidence::j)
        .def_readonly("z", &PairConfidence::z)
        .def_readonly("m_hat", &PairConfidence::m_hat)
        .def_readonly("c", &PairConfidence::c)
        .def_property_readonly("verdict", [](const PairConfidence& p) { return std::string(verdict_name(p.verdict)); })
        .def_property_readonly("margin", &PairConfidence::margin);

    py::class_<ConfidenceReport>(m, "ConfidenceReport")
        .def_property_readonly("delta", &ConfidenceReport::delta)
        .def_property_readonly("pairs", &ConfidenceReport::pairs)
        .def("pair", &ConfidenceReport::pair)
        .def("decided_count", &ConfidenceReport::decided_count)
        .def("heatmap", [](const ConfidenceReport& r, const Ranking& order) { return significance_heatmap(r, order); });

    m.def(
        "hoeffding_halfwidth",
        [](std::uint64_t z, double delta, bool two_sided) {
            return hoeffding_halfwidth(z, delta,
                                       two_sided ? HoeffdingConstant::two_sided : HoeffdingConstant::log_inv_delta);
        },
        py::arg("z"), py::arg("delta"), py::arg("two_sided") = false);
    m.def(
        "confidence_report",
        [](const AccumulatedMatrix& acc, double delta, bool two_sided) {
            return confidence_report(acc, delta,
                                     two_sided ? HoeffdingConstant::two_sided : HoeffdingConstant::log_inv_delta);
        },
        py::arg("acc"), py::arg("delta") = 0.05, py::arg("two_sided") = false);

    // Synthetic data.
    m.def(
        "generate_gumbel",
        [](std::size_t systems, std::size_t tasks, std::size_t instances, double phi, double beta, std::uint64_t seed) {
            return generate_gumbel(GumbelConfig{systems, tasks, instances, phi, beta, seed});
        },
        py::arg("systems") = 20, py::arg("tasks") = 20, py::arg("instances") = 20, py::arg("phi") = 0.5,
        py::arg("beta") = 1.0, py::arg("seed") = 0);
    m.def("corrupt_missing", [](const ScoreTable& t, double eta, std::uint64_t seed) {
        return corrupt_missing_task(t, eta, seed);
    }, py::arg("data"), py::arg("eta"), py::arg("seed"));
    m.def("corrupt_missing", [](const ScoreTensor& x, double eta, std::uint64_t seed) {
        return corrupt_missing_instance(x, eta, seed);
    }, py::arg("data"), py::arg("eta"), py::arg("seed"));
    m.def("scale_task", py::overload_cast<const ScoreTable&, std::size_t, double>(&scale_task));
    m.def("scale_task", py::overload_cast<const ScoreTensor&, std::size_t, double>(&scale_task));
    m.def("removal_count", &removal_count, py::arg("eta"), py::arg("cells"));

    // Evaluation.
    m.def("kendall_tau", &kendall_tau);
    m.def("topk_same", &topk_same);
    m.def(
        "robustness_curve",
        [](const Dataset& data, const std::vector<std::string>& methods, const std::vector<double>& etas,
           std::size_t repeats, std::uint64_t seed, bool random_tie_break, std::optional<std::size_t> scale,
           double lambda_scale, std::size_t threads) {
            const auto res = robustness_curve(
                data, experiment_options(methods, etas, repeats, seed, random_tie_break, scale, lambda_scale, threads));
            return py::module_::import("json").attr("loads")(robustness_json(res));
        },
        py::arg("data"), py::arg("methods"), py::arg("etas"), py::arg("repeats") = 100, py::arg("seed") = 0,
        py::arg("random_tie_break") = true, py::arg("scale_task") = py::none(), py::arg("lambda_scale") = 1.0,
        py::arg("threads") = 1);
    m.def(
        "agreement_analysis",
        [](const Dataset& data, const std::vector<std::string>& methods, const std::vector<double>& etas,
           std::size_t repeats, std::uint64_t seed, bool random_tie_break, std::optional<std::size_t> scale,
           double lambda_scale, std::size_t threads) {
            const auto res = agreement_analysis(
                data, experiment_options(methods, etas, repeats, seed, random_tie_break, scale, lambda_scale, threads));
            return py::module_::import("json").attr("loads")(agreement_json(res));
        },
        py::arg("data"), py::arg("methods"), py::arg("etas"), py::arg("repeats") = 100, py::arg("seed") = 0,
        py::arg("random_tie_break") = true, py::arg("scale_task") = py::none(), py::arg("lambda_scale") = 1.0,
        py::arg("threads") = 1);

    // Files.
    py::class_<LabeledData>(m, "LabeledData")
        .def_readonly("data", &LabeledData::data)
        .def_readonly("systems", &LabeledData::systems)
        .def_readonly("tasks", &LabeledData::tasks)
        .def_readonly("instances", &LabeledData::instances)
        .def_property_readonly("level", [](const LabeledData& d) { return std::string(level_name(d.level())); })
        .def("to_csv", [](const LabeledData& d) {
            std::ostringstream out;
            write_long_csv(out, d);
            return out.str();
        });
    m.def(
        "parse_long_csv",
        [](const std::string& text, const std::string& level) {
            std::istringstream in(text);
            return parse_long_csv(in, parse_level(level));
        },
        py::arg("text"), py::arg("level") = "task");
    m.def(
        "parse_wide_matrix",
        [](const std::string& text) {
            std::istringstream in(text);
            return parse_wide_matrix(in);
        },
        py::arg("text"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args, const std::string& stdin_text) {
            std::istringstream in(stdin_text);
            std::ostringstream out, err;
            const int code = run_cli(args, in, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), py::arg("stdin") = "", "Runs the command line tool; returns (exit code, stdout, stderr).");

#ifdef VERSION_INFO
#define PARTIALRANK_STR(x) #x
#define PARTIALRANK_XSTR(x) PARTIALRANK_STR(x)
    m.attr("__version__") = PARTIALRANK_XSTR(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
