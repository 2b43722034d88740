#include "advpipe/report.hpp"

#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "advpipe/rng.hpp"

namespace advpipe::report {
namespace {

std::string fmt_double(double v) {
    std::ostringstream out;
    out.precision(std::numeric_limits<double>::max_digits10);
    out << v;
    return out.str();
}

std::string fmt_percent(double rate) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", rate * 100.0);
    return buf;
}

std::vector<std::string> split_line(const std::string& s) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        parts.push_back(item);
    }
    return parts;
}

void check_label(const std::string& label, const char* what) {
    if (label.empty() || label.find(',') != std::string::npos ||
        label.find('\n') != std::string::npos) {
        throw std::invalid_argument(std::string(what) +
                                    " must be non-empty and comma-free: " + label);
    }
}

void check_report(const EvalReport& r) {
    if (r.policy != "clean_correct" && r.policy != "all") {
        throw std::invalid_argument("unknown denominator policy: " + r.policy);
    }
    if (r.targets.size() != r.clean_accuracy.size()) {
        throw std::invalid_argument("report: one clean accuracy per target required");
    }
    for (const std::string& t : r.targets) {
        check_label(t, "target id");
    }
    for (std::size_t i = 0; i < r.targets.size(); ++i) {
        for (std::size_t j = i + 1; j < r.targets.size(); ++j) {
            if (r.targets[i] == r.targets[j]) {
                throw std::invalid_argument("duplicate target id: " + r.targets[i]);
            }
        }
    }
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        check_label(r.rows[i].source, "source id");
        check_label(r.rows[i].attack, "attack name");
        if (r.rows[i].cells.size() != r.targets.size()) {
            throw std::invalid_argument("report row has wrong cell count: " +
                                        r.rows[i].source + "/" + r.rows[i].attack);
        }
        for (std::size_t j = i + 1; j < r.rows.size(); ++j) {
            if (r.rows[i].source == r.rows[j].source &&
                r.rows[i].attack == r.rows[j].attack) {
                throw std::invalid_argument("duplicate report row: " + r.rows[i].source +
                                            "/" + r.rows[i].attack);
            }
        }
        for (const EvalCell& c : r.rows[i].cells) {
            if (c.successes < 0 || c.denominator < 0 || c.successes > c.denominator) {
                throw std::invalid_argument("report cell counts out of range");
            }
        }
    }
}

}  // namespace

std::string to_csv(const EvalReport& report) {
    check_report(report);
    std::ostringstream out;
    out << "policy," << report.policy << "\n";
    for (std::size_t t = 0; t < report.targets.size(); ++t) {
        out << "target," << report.targets[t] << ","
            << fmt_double(report.clean_accuracy[t]) << "\n";
    }
    for (const EvalRow& row : report.rows) {
        for (std::size_t t = 0; t < report.targets.size(); ++t) {
            out << "cell," << row.source << "," << row.attack << ","
                << report.targets[t] << "," << row.cells[t].successes << ","
                << row.cells[t].denominator << "\n";
        }
    }
    return out.str();
}

EvalReport from_csv(const std::string& text) {
    EvalReport r;
    r.policy.clear();
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> f = split_line(line);
        try {
            if (f[0] == "policy" && f.size() == 2) {
                r.policy = f[1];
            } else if (f[0] == "target" && f.size() == 3) {
                r.targets.push_back(f[1]);
                r.clean_accuracy.push_back(std::stod(f[2]));
            } else if (f[0] == "cell" && f.size() == 6) {
                const std::string& source = f[1];
                const std::string& attack = f[2];
                const std::string& target = f[3];
                std::size_t t = 0;
                while (t < r.targets.size() && r.targets[t] != target) {
                    ++t;
                }
                if (t == r.targets.size()) {
                    throw std::runtime_error("cell references unknown target " + target);
                }
                EvalRow* row = nullptr;
                if (!r.rows.empty() && r.rows.back().source == source &&
                    r.rows.back().attack == attack) {
                    row = &r.rows.back();
                } else {
                    r.rows.push_back({source, attack,
                                      std::vector<EvalCell>(r.targets.size())});
                    row = &r.rows.back();
                }
                row->cells[t].successes = std::stoll(f[4]);
                row->cells[t].denominator = std::stoll(f[5]);
            } else {
                throw std::runtime_error("unrecognized row kind");
            }
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "report CSV line " << line_no << ": " << e.what() << ": " << line;
            throw std::runtime_error(msg.str());
        }
    }
    check_report(r);
    return r;
}

std::string to_markdown(const EvalReport& report) {
    check_report(report);
    std::ostringstream out;
    out << "# Attack success rates\n\n";
    out << "Denominator policy: `" << report.policy << "`\n\n";
    out << "| target | clean accuracy |\n|---|---|\n";
    for (std::size_t t = 0; t < report.targets.size(); ++t) {
        out << "| " << report.targets[t] << " | "
            << fmt_percent(report.clean_accuracy[t]) << "% |\n";
    }
    out << "\n| source | attack |";
    for (const std::string& t : report.targets) {
        out << " " << t << " |";
    }
    out << "\n|---|---|";
    for (std::size_t t = 0; t < report.targets.size(); ++t) {
        out << "---|";
    }
    out << "\n";
    for (const EvalRow& row : report.rows) {
        out << "| " << row.source << " | " << row.attack << " |";
        for (const EvalCell& c : row.cells) {
            out << " " << fmt_percent(c.rate()) << "% |";
        }
        out << "\n";
    }
    return out.str();
}

EvalReport pool_reports(const std::vector<EvalReport>& reports) {
    if (reports.empty()) {
        throw std::invalid_argument("pool_reports: no reports");
    }
    EvalReport pooled = reports[0];
    for (std::size_t i = 1; i < reports.size(); ++i) {
        const EvalReport& r = reports[i];
        if (r.policy != pooled.policy || r.targets != pooled.targets ||
            r.rows.size() != pooled.rows.size()) {
            throw std::invalid_argument("pool_reports: reports disagree on shape");
        }
        for (std::size_t t = 0; t < pooled.targets.size(); ++t) {
            pooled.clean_accuracy[t] += r.clean_accuracy[t];
        }
        for (std::size_t j = 0; j < pooled.rows.size(); ++j) {
            if (r.rows[j].source != pooled.rows[j].source ||
                r.rows[j].attack != pooled.rows[j].attack) {
                throw std::invalid_argument("pool_reports: reports disagree on rows");
            }
            for (std::size_t t = 0; t < pooled.targets.size(); ++t) {
                pooled.rows[j].cells[t].successes += r.rows[j].cells[t].successes;
                pooled.rows[j].cells[t].denominator += r.rows[j].cells[t].denominator;
            }
        }
    }
    for (double& a : pooled.clean_accuracy) {
        a /= static_cast<double>(reports.size());
    }
    check_report(pooled);
    return pooled;
}

EvalReport run_matrix(const MatrixJob& job) {
    if (job.sources.empty() || job.targets.empty() || job.attacks.empty()) {
        throw std::invalid_argument("run_matrix: sources, targets and attacks required");
    }
    if (job.dataset == nullptr || job.dataset->examples.empty()) {
        throw std::invalid_argument("run_matrix: empty dataset");
    }
    if (job.policy != "clean_correct" && job.policy != "all") {
        throw std::invalid_argument("run_matrix: unknown denominator policy " + job.policy);
    }
    const std::vector<models::LabeledExample>& examples = job.dataset->examples;
    const std::size_t n = examples.size();

    EvalReport report;
    report.policy = job.policy;
    // Which examples each target already classifies correctly in clean form;
    // doubles as the clean-accuracy column and the default denominator.
    std::vector<std::vector<bool>> clean_ok(job.targets.size(),
                                            std::vector<bool>(n, false));
    for (std::size_t t = 0; t < job.targets.size(); ++t) {
        std::size_t hits = 0;
        for (std::size_t e = 0; e < n; ++e) {
            const bool ok = models::predict(*job.targets[t].second,
                                            examples[e].image) == examples[e].label;
            clean_ok[t][e] = ok;
            hits += ok ? 1 : 0;
        }
        report.targets.push_back(job.targets[t].first);
        report.clean_accuracy.push_back(static_cast<double>(hits) /
                                        static_cast<double>(n));
    }

    std::uint64_t row_index = 0;
    for (const NamedModel& source : job.sources) {
        for (const attack::AttackConfig& base_cfg : job.attacks) {
            // success[e * T + t]: did example e fool target t after this
            // row's attack. Filled per example, so worker threads write
            // disjoint slots and the outcome is partition-independent.
            std::vector<std::uint8_t> success(n * job.targets.size(), 0);
            const std::uint64_t row_seed = child_seed(job.base_seed, row_index);

            auto run_range = [&](std::size_t begin, std::size_t end,
                                 std::exception_ptr& error) {
                try {
                    for (std::size_t e = begin; e < end; ++e) {
                        attack::AttackConfig cfg = base_cfg;
                        cfg.seed = child_seed(row_seed, e);
                        cfg.record_snapshots = false;
                        const attack::AttackResult res = attack::run_attack(
                            *source.second, examples[e].image, examples[e].label, cfg);
                        for (std::size_t t = 0; t < job.targets.size(); ++t) {
                            const int pred =
                                models::predict(*job.targets[t].second, res.x_adv);
                            success[e * job.targets.size() + t] =
                                pred != examples[e].label ? 1 : 0;
                        }
                    }
                } catch (...) {
                    error = std::current_exception();
                }
            };

            const int threads = std::max(1, job.threads);
            if (threads == 1 || n < 2) {
                std::exception_ptr error;
                run_range(0, n, error);
                if (error) {
                    try {
                        std::rethrow_exception(error);
                    } catch (const std::exception& e) {
                        throw std::runtime_error("matrix cell (source=" + source.first +
                                                 ", attack=" + base_cfg.name +
                                                 "): " + e.what());
                    }
                }
            } else {
                const std::size_t workers =
                    std::min<std::size_t>(static_cast<std::size_t>(threads), n);
                std::vector<std::thread> pool;
                std::vector<std::exception_ptr> errors(workers);
                const std::size_t chunk = (n + workers - 1) / workers;
                for (std::size_t w = 0; w < workers; ++w) {
                    const std::size_t begin = w * chunk;
                    const std::size_t end = std::min(n, begin + chunk);
                    if (begin >= end) {
                        break;
                    }
                    pool.emplace_back(run_range, begin, end, std::ref(errors[w]));
                }
                for (std::thread& th : pool) {
                    th.join();
                }
                for (const std::exception_ptr& err : errors) {
                    if (err) {
                        try {
                            std::rethrow_exception(err);
                        } catch (const std::exception& e) {
                            throw std::runtime_error("matrix cell (source=" +
                                                     source.first + ", attack=" +
                                                     base_cfg.name + "): " + e.what());
                        }
                    }
                }
            }

            EvalRow row;
            row.source = source.first;
            row.attack = base_cfg.name;
            row.cells.resize(job.targets.size());
            for (std::size_t t = 0; t < job.targets.size(); ++t) {
                EvalCell& cell = row.cells[t];
                for (std::size_t e = 0; e < n; ++e) {
                    const bool counted =
                        job.policy == "all" || clean_ok[t][e];
                    if (!counted) {
                        continue;
                    }
                    cell.denominator += 1;
                    cell.successes += success[e * job.targets.size() + t];
                }
            }
            report.rows.push_back(std::move(row));
            ++row_index;
        }
    }
    check_report(report);
    return report;
}

}  // namespace advpipe::report
