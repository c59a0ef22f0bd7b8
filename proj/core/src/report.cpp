#include "p300bench/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "p300bench/error.hpp"

namespace p300 {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
    if (!std::isfinite(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json summary_json(const Summary& s) {
    return {{"mean", std::isfinite(s.mean) ? json(s.mean) : json()},
            {"sd", std::isfinite(s.sd) ? json(s.sd) : json()},
            {"n", s.n}};
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_data("cannot write " + path.string());
    return out;
}

void metric_rows(std::ostream& out, std::size_t iteration, const std::string& model, const std::string& split,
                 const MetricSet& m) {
    const std::string prefix = std::to_string(iteration) + ',' + model + ',' + split + ',';
    out << prefix << "accuracy," << num(m.accuracy) << '\n';
    out << prefix << "precision," << num(m.precision) << '\n';
    out << prefix << "recall," << num(m.recall) << '\n';
    out << prefix << "auc," << (m.auc ? num(*m.auc) : "") << '\n';
}

void summary_cells(std::ostream& out, const MetricSummary& s) {
    out << num(s.accuracy.mean) << ',' << num(s.accuracy.sd) << ',' << num(s.precision.mean) << ','
        << num(s.precision.sd) << ',' << num(s.recall.mean) << ',' << num(s.recall.sd) << ','
        << (s.auc ? num(s.auc->mean) : "") << ',' << (s.auc ? num(s.auc->sd) : "") << ',' << s.accuracy.n;
}

std::vector<std::optional<MetricSet>> column(const ModelResult& r, std::size_t k_index) {
    std::vector<std::optional<MetricSet>> out;
    for (const auto& it : r.averaging) out.push_back(it[k_index]);
    return out;
}

}  // namespace

Summary summarize(std::span<const double> values) {
    Summary s;
    s.n = values.size();
    if (s.n == 0) return {kNaN, kNaN, 0};
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n < 2) {
        s.sd = kNaN;
        return s;
    }
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
    return s;
}

MetricSummary summarize(std::span<const MetricSet> runs) {
    std::vector<double> acc, prec, rec, auc;
    bool auc_defined = true;
    for (const auto& m : runs) {
        acc.push_back(m.accuracy);
        prec.push_back(m.precision);
        rec.push_back(m.recall);
        if (m.auc) auc.push_back(*m.auc);
        else auc_defined = false;
    }
    MetricSummary s{summarize(acc), summarize(prec), summarize(rec), std::nullopt};
    if (auc_defined) s.auc = summarize(auc);
    return s;
}

MetricSummary summarize(std::span<const std::optional<MetricSet>> runs) {
    std::vector<MetricSet> defined;
    for (const auto& m : runs)
        if (m) defined.push_back(*m);
    return summarize(std::span<const MetricSet>(defined));
}

json to_json(const MetricSet& m) {
    return {{"accuracy", m.accuracy},
            {"precision", m.precision},
            {"recall", m.recall},
            {"auc", m.auc ? json(*m.auc) : json()}};
}

json to_json(const MetricSummary& s) {
    return {{"accuracy", summary_json(s.accuracy)},
            {"precision", summary_json(s.precision)},
            {"recall", summary_json(s.recall)},
            {"auc", s.auc ? summary_json(*s.auc) : json()}};
}

json report_to_json(const EvalReport& report) {
    json models = json::array();
    for (const auto& r : report.models) {
        json val = json::array(), hold = json::array();
        for (const auto& m : r.validation) val.push_back(to_json(m));
        for (const auto& m : r.holdout) hold.push_back(to_json(m));
        json entry = {{"name", r.model},
                      {"validation", val},
                      {"holdout", hold},
                      {"aggregate",
                       {{"validation", to_json(summarize(std::span<const MetricSet>(r.validation)))},
                        {"holdout", to_json(summarize(std::span<const MetricSet>(r.holdout)))}}}};
        if (!r.averaging.empty()) {
            json per_k = json::array();
            for (std::size_t k = 0; k < report.k_max; ++k) {
                const auto col = column(r, k);
                json runs = json::array();
                for (const auto& m : col) runs.push_back(m ? to_json(*m) : json());
                per_k.push_back({{"k", k + 1},
                                 {"runs", runs},
                                 {"aggregate", to_json(summarize(std::span<const std::optional<MetricSet>>(col)))}});
            }
            entry["averaging"] = per_k;
        }
        if (!r.training_logs.empty()) {
            json epochs = json::array();
            for (const auto& log : r.training_logs) epochs.push_back(log.size());
            entry["epochs_trained"] = epochs;
        }
        models.push_back(entry);
    }
    return {{"format", "p300bench-report"},
            {"version", 1},
            {"config", report.config},
            {"n_epochs", report.n_epochs},
            {"n_holdout", report.n_holdout},
            {"n_iterations", report.n_iterations},
            {"k_max", report.k_max},
            {"models", models},
            {"warnings", report.warnings}};
}

std::vector<std::string> write_report(const EvalReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> files;

    {
        auto out = open_out(dir / "report.json");
        out << report_to_json(report).dump(2) << '\n';
        files.push_back("report.json");
    }
    {
        auto out = open_out(dir / "iterations.csv");
        out << "iteration,model,split,metric,value\n";
        for (const auto& r : report.models) {
            for (std::size_t i = 0; i < r.validation.size(); ++i) {
                metric_rows(out, i, r.model, "validation", r.validation[i]);
                metric_rows(out, i, r.model, "holdout", r.holdout[i]);
            }
            for (std::size_t i = 0; i < r.averaging.size(); ++i)
                for (std::size_t k = 0; k < r.averaging[i].size(); ++k)
                    if (r.averaging[i][k])
                        metric_rows(out, i, r.model, "holdout_k" + std::to_string(k + 1), *r.averaging[i][k]);
        }
        files.push_back("iterations.csv");
    }
    {
        auto out = open_out(dir / "aggregate.csv");
        out << "model,split,accuracy_mean,accuracy_sd,precision_mean,precision_sd,recall_mean,recall_sd,auc_mean,"
               "auc_sd,n\n";
        for (const auto& r : report.models) {
            out << r.model << ",validation,";
            summary_cells(out, summarize(std::span<const MetricSet>(r.validation)));
            out << '\n' << r.model << ",holdout,";
            summary_cells(out, summarize(std::span<const MetricSet>(r.holdout)));
            out << '\n';
        }
        files.push_back("aggregate.csv");
    }
    if (report.k_max > 0) {
        auto out = open_out(dir / "averaging.csv");
        out << "model,k,accuracy_mean,accuracy_sd,precision_mean,precision_sd,recall_mean,recall_sd,auc_mean,auc_sd,"
               "n\n";
        for (const auto& r : report.models)
            for (std::size_t k = 0; k < report.k_max; ++k) {
                const auto col = column(r, k);
                out << r.model << ',' << k + 1 << ',';
                summary_cells(out, summarize(std::span<const std::optional<MetricSet>>(col)));
                out << '\n';
            }
        files.push_back("averaging.csv");
    }
    bool any_logs = false;
    for (const auto& r : report.models) any_logs = any_logs || !r.training_logs.empty();
    if (any_logs) {
        auto out = open_out(dir / "training_log.csv");
        out << "model,iteration,epoch,train_loss,val_loss\n";
        for (const auto& r : report.models)
            for (std::size_t i = 0; i < r.training_logs.size(); ++i)
                for (const auto& e : r.training_logs[i])
                    out << r.model << ',' << i << ',' << e.epoch << ',' << num(e.train_loss) << ','
                        << num(e.val_loss) << '\n';
        files.push_back("training_log.csv");
    }
    return files;
}

json train_times_json(const EvalReport& report) {
    json out = json::object();
    for (const auto& r : report.models) {
        std::vector<double> t = r.train_seconds;
        out[r.model] = {{"train_seconds", t}, {"mean", summarize(t).mean}};
    }
    return out;
}

}  // namespace p300
