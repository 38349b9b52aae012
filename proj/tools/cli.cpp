#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vlambda/analytics.hpp"
#include "vlambda/arith.hpp"
#include "vlambda/construction.hpp"
#include "vlambda/count_engine.hpp"
#include "vlambda/errors.hpp"
#include "vlambda/image_oracle.hpp"
#include "vlambda/series.hpp"

namespace vlambda::cli {

namespace {

using json = nlohmann::ordered_json;

enum class Format { json, csv };

/// Writes one record per line, either as JSON or as CSV under a header
/// taken from the first record's keys.
class RecordWriter {
public:
    RecordWriter(std::ostream& out, Format format) : out_(out), format_(format) {}

    void header(std::vector<std::string> columns) { columns_ = std::move(columns); }

    void write(json const& record) {
        if (format_ == Format::json) {
            out_ << record.dump() << '\n';
            out_.flush();
            return;
        }
        if (columns_.empty())
            for (auto const& item : record.items())
                columns_.push_back(item.key());
        if (!header_written_) {
            for (std::size_t i = 0; i < columns_.size(); ++i)
                out_ << (i ? "," : "") << columns_[i];
            out_ << '\n';
            header_written_ = true;
        }
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            out_ << (i ? "," : "");
            auto it = record.find(columns_[i]);
            if (it == record.end() || it->is_null())
                continue;
            if (it->is_string())
                out_ << it->get<std::string>();
            else
                out_ << it->dump();
        }
        out_ << '\n';
        out_.flush();
    }

private:
    std::ostream& out_;
    Format format_;
    std::vector<std::string> columns_;
    bool header_written_ = false;
};

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && u128{r} * r > n)
        --r;
    while (u128{r + 1} * (r + 1) <= n)
        ++r;
    return r;
}

/// Tables large enough to factor n and test primality up to n + 1.
PrimeTables tables_for(u64 n, u64 floor = 1000) { return PrimeTables(std::max(floor, isqrt(n + 1) + 1)); }

json representation_json(Representation const& rep) {
    return json{{"a", rep.a}, {"b", rep.b}, {"B", rep.B}, {"q", rep.q}};
}

std::vector<u64> default_checkpoints(u64 limit) {
    std::vector<u64> cps;
    for (u64 p = 10; p < limit; p *= 10)
        cps.push_back(p);
    cps.push_back(limit);
    return cps;
}

class TeeSink : public CheckpointSink {
public:
    TeeSink(RecordWriter& writer, std::unique_ptr<SeriesFileSink> file) : writer_(writer), file_(std::move(file)) {}

    void emit(CountCheckpoint const& c) override {
        if (file_)
            file_->emit(c);
        writer_.write(json{{"x", c.x},
                           {"v_lambda", c.v_lambda},
                           {"eta_hat", number_or_null(c.eta_hat)},
                           {"wall_seconds", c.wall_seconds},
                           {"segment_size", c.segment_size},
                           {"workers", c.workers}});
    }

private:
    RecordWriter& writer_;
    std::unique_ptr<SeriesFileSink> file_;
};

} // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Carmichael lambda values: membership, V_lambda(x) counting and exponent analytics", "vlambda"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format_name = "json";
    app.add_option("--format", format_name, "Output format")->check(CLI::IsMember({"json", "csv"}));
    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "Seed for randomized checks");

    u64 n_arg = 0;
    auto* lambda_cmd = app.add_subcommand("lambda", "Print lambda(n)");
    lambda_cmd->add_option("n", n_arg)->required();
    auto* phi_cmd = app.add_subcommand("phi", "Print phi(n)");
    phi_cmd->add_option("n", n_arg)->required();

    bool want_witness = false;
    auto* member_cmd = app.add_subcommand("member", "Decide whether n is a lambda value (exit 3 if not)");
    member_cmd->add_option("n", n_arg)->required();
    member_cmd->add_flag("--witness", want_witness, "Print the maximal witness modulus");

    u64 limit = 0;
    std::vector<u64> checkpoints;
    u64 every = 0;
    u64 segment_size = EngineConfig{}.segment_size;
    unsigned threads = default_workers();
    std::string out_path, resume_path;
    auto* count_cmd = app.add_subcommand("count", "Count V_lambda(x) with checkpoints");
    count_cmd->add_option("--limit", limit, "Count through this x")->required();
    count_cmd->add_option("--checkpoints", checkpoints, "Extra checkpoint positions")->delimiter(',');
    count_cmd->add_option("--every", every, "Also checkpoint at every multiple of this value");
    count_cmd->add_option("--segment-size", segment_size, "Sieve segment length");
    count_cmd->add_option("--threads", threads, "Worker threads");
    count_cmd->add_option("--out", out_path, "Series file to write");
    count_cmd->add_option("--resume", resume_path, "Series file to continue from (appended to unless --out)");

    unsigned k = 2;
    bool relax = false;
    std::size_t max_reps = 10;
    double rep_x = 0;
    auto* reps_cmd = app.add_subcommand("reps", "Representations of squarefree n as lambda of a k-prime modulus");
    reps_cmd->add_option("n", n_arg)->required();
    reps_cmd->add_option("--k", k)->required();
    reps_cmd->add_flag("--relax", relax, "Drop smoothness, omega and range conditions");
    reps_cmd->add_option("--max", max_reps, "Representations to list");
    reps_cmd->add_option("--x", rep_x, "Scale for the parameters (default n)");

    u64 x_arg = 0;
    auto* s1s2_cmd = app.add_subcommand("s1s2", "First and second moments of r(n)");
    s1s2_cmd->add_option("--x", x_arg)->required();
    s1s2_cmd->add_option("--k", k)->required();
    s1s2_cmd->add_flag("--relax", relax);
    s1s2_cmd->add_option("--threads", threads);

    unsigned k_max = 10;
    auto* const_cmd = app.add_subcommand("constants", "eta, alpha and the beta_k table");
    const_cmd->add_option("--k-max", k_max);

    unsigned h = 1;
    auto* lemma_cmd = app.add_subcommand("lemma1", "Symmetric prime sum against (log log x)^h / h!");
    lemma_cmd->add_option("--x", x_arg)->required();
    lemma_cmd->set_help_flag("--help", "Print this help message and exit");
    lemma_cmd->add_option("--h", h, "Number of prime factors")->required();

    std::string in_path;
    auto* fit_cmd = app.add_subcommand("fit", "Exponent estimates from a series file");
    fit_cmd->add_option("--in", in_path)->required();

    auto* mult_cmd = app.add_subcommand("multtable", "Distinct entries of the n x n multiplication table");
    mult_cmd->add_option("--n", n_arg)->required();
    auto* phic_cmd = app.add_subcommand("phicount", "Number of distinct phi values <= x");
    phic_cmd->add_option("--limit", limit)->required();
    auto* omega_cmd = app.add_subcommand("omegadist", "Mean omega over lambda values and over all n <= x");
    omega_cmd->add_option("--limit", limit)->required();

    unsigned m = 0, omega_b = 1, trials = 10;
    auto* dual_cmd = app.add_subcommand("dual", "Dual-factorization count: formula and enumeration");
    dual_cmd->add_option("--k", k)->required();
    dual_cmd->add_option("--m", m)->required();
    dual_cmd->add_option("--omega", omega_b)->required();
    auto* bv_cmd = app.add_subcommand("bvcheck", "Check B_v = B'_v on random squarefree b");
    bv_cmd->add_option("--k", k)->required();
    bv_cmd->add_option("--m", m)->required();
    bv_cmd->add_option("--trials", trials);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (CLI::CallForHelp const&) {
        out << app.help();
        return ok;
    } catch (CLI::CallForAllHelp const&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (CLI::ParseError const& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return usage;
    }

    RecordWriter writer(out, format_name == "csv" ? Format::csv : Format::json);

    try {
        if (*lambda_cmd) {
            if (n_arg == 0)
                throw range_error("n must be positive");
            auto tables = tables_for(n_arg);
            writer.write(json{{"n", n_arg}, {"lambda", carmichael_lambda(n_arg, tables)}});
        } else if (*phi_cmd) {
            if (n_arg == 0)
                throw range_error("n must be positive");
            auto tables = tables_for(n_arg);
            writer.write(json{{"n", n_arg}, {"phi", euler_phi(n_arg, tables)}});
        } else if (*member_cmd) {
            if (n_arg == 0)
                throw range_error("n must be positive");
            auto tables = tables_for(n_arg);
            auto prof = max_lambda_divisor(n_arg, tables);
            bool const is_value = prof.L == n_arg;
            json rec{{"n", n_arg}, {"is_value", is_value}, {"L", prof.L}};
            if (want_witness)
                rec["witness_factorization"] = max_witness(prof).to_string();
            writer.write(rec);
            return is_value ? ok : not_a_value;
        } else if (*count_cmd) {
            if (segment_size < EngineConfig::min_segment_size || threads == 0) {
                err << "error: --segment-size must be >= " << EngineConfig::min_segment_size
                    << " and --threads >= 1\n";
                return usage;
            }
            std::optional<ContinuationState> from;
            if (!resume_path.empty())
                from = resume(resume_path);

            std::unique_ptr<SeriesFileSink> file;
            if (!out_path.empty()) {
                file = std::make_unique<SeriesFileSink>(out_path, true);
                if (from)
                    for (auto const& c : from->series.records)
                        file->emit(c);
            } else if (!resume_path.empty()) {
                file = std::make_unique<SeriesFileSink>(resume_path, false);
            }

            std::vector<u64> cps = checkpoints.empty() ? default_checkpoints(limit) : checkpoints;
            if (every > 0)
                for (u64 c = every; c < limit; c += every)
                    cps.push_back(c);

            writer.header({"x", "v_lambda", "eta_hat", "wall_seconds"});
            EngineConfig cfg;
            cfg.segment_size = segment_size;
            cfg.workers = threads;
            CountEngine engine(limit, cfg);
            TeeSink sink(writer, std::move(file));
            engine.count_up_to(limit, cps, &sink, from ? &*from : nullptr);
        } else if (*reps_cmd) {
            auto tables = tables_for(n_arg);
            auto params = params_for(std::max(rep_x > 0 ? rep_x : static_cast<double>(n_arg), 16.0), k);
            if (relax)
                params.relaxations = Relaxations::relaxed();
            auto result = find_representations(n_arg, params, max_reps, tables);
            json reps = json::array();
            for (auto const& r : result.representations)
                reps.push_back(representation_json(r));
            writer.write(json{{"n", n_arg},
                              {"k", k},
                              {"relaxed", relax},
                              {"y", params.y},
                              {"l", params.l},
                              {"degenerate", params.degenerate},
                              {"r", result.count},
                              {"representations", reps}});
        } else if (*s1s2_cmd) {
            auto tables = tables_for(x_arg);
            auto params = params_for(std::max<double>(static_cast<double>(x_arg), 16.0), k);
            if (relax)
                params.relaxations = Relaxations::relaxed();
            auto r = empirical_s1_s2(x_arg, k, params, tables, threads);
            writer.write(json{{"x", x_arg},
                              {"k", k},
                              {"relaxed", relax},
                              {"S1", r.s1},
                              {"S2", r.s2},
                              {"positive_count", r.positive_count},
                              {"cauchy_bound", r.cauchy_bound},
                              {"cauchy_holds", r.cauchy_holds}});
        } else if (*const_cmd) {
            auto rep = constants(k_max);
            writer.write(json{{"name", "eta"}, {"value", rep.eta}});
            writer.write(json{{"name", "alpha"}, {"value", rep.alpha}});
            writer.write(json{{"name", "lp_lower_exponent"}, {"value", rep.lp_lower}});
            for (auto const& row : rep.beta) {
                std::string name = "beta_" + std::to_string(row.k);
                writer.write(json{{"name", name}, {"value", row.beta}});
            }
        } else if (*lemma_cmd) {
            auto r = lemma1_ratio(x_arg, h);
            writer.write(json{{"x", x_arg},
                              {"h", h},
                              {"exact_sum", static_cast<double>(r.exact_sum)},
                              {"reference", static_cast<double>(r.reference)},
                              {"ratio", static_cast<double>(r.ratio)}});
        } else if (*fit_cmd) {
            auto series = load_series(in_path);
            writer.header({"x", "v_lambda", "eta_hat"});
            for (auto const& row : exponent_fit(series))
                writer.write(json{{"x", row.x}, {"v_lambda", row.v_lambda}, {"eta_hat", number_or_null(row.eta_hat)}});
        } else if (*mult_cmd) {
            u64 c = mult_table_count(n_arg);
            writer.write(json{{"n", n_arg}, {"distinct", c}, {"exponent", number_or_null(mult_table_exponent(n_arg, c))}});
        } else if (*phic_cmd) {
            writer.write(json{{"x", limit}, {"v_phi", phi_image_count(limit)}});
        } else if (*omega_cmd) {
            auto tables = PrimeTables(std::max<u64>(limit, 2));
            auto d = omega_distribution(limit, tables);
            writer.write(json{{"x", limit},
                              {"image_size", d.image_size},
                              {"mean_omega_image", d.mean_omega_image},
                              {"mean_omega_all", d.mean_omega_all},
                              {"reference", d.reference}});
        } else if (*dual_cmd) {
            writer.write(json{{"k", k},
                              {"m", m},
                              {"omega", omega_b},
                              {"formula", dual_count_formula(k, m, omega_b)},
                              {"bruteforce", dual_count_bruteforce(k, m, omega_b)}});
        } else if (*bv_cmd) {
            bool okay = b_v_identity_check(k, m, trials, seed);
            writer.write(json{{"k", k}, {"m", m}, {"trials", trials}, {"seed", seed}, {"holds", okay}});
            return okay ? ok : failure;
        }
    } catch (corruption_error const& e) {
        err << "error: corrupt series: " << e.what() << '\n';
        return corrupt_series;
    } catch (config_error const& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (range_error const& e) {
        err << "error: " << e.what() << '\n';
        return out_of_range;
    } catch (overflow_error const& e) {
        err << "error: " << e.what() << '\n';
        return out_of_range;
    } catch (domain_error const& e) {
        err << "error: " << e.what() << '\n';
        return out_of_range;
    } catch (complexity_error const& e) {
        err << "error: " << e.what() << '\n';
        return out_of_range;
    } catch (std::exception const& e) {
        err << "error: " << e.what() << '\n';
        return failure;
    }
    return ok;
}

} // namespace vlambda::cli
