#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "chp/formulations.hpp"
#include "chp/instance_io.hpp"
#include "chp/lp.hpp"
#include "chp/pricing.hpp"
#include "chp/random_instance.hpp"
#include "chp/uc_dp.hpp"

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
  std::string instance;
  std::string method = "chp";
  std::string out;
  std::string format = "csv";
  bool pretty = false;
  int pieces = 10;
  double gap_tol = 1e-6;
  long node_limit = 1000000;
  int fuzz = 0;
  std::uint64_t seed = 1;
  std::string dump_lp;
  std::string trace_dp;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A CSV section: header plus rows, rendered either as CSV or aligned.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void render(std::ostream& out, const std::vector<Table>& tables, bool pretty) {
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (i > 0) out << '\n';
    const auto& t = tables[i];
    if (!pretty) {
      auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) out << (c ? "," : "") << cells[c];
        out << '\n';
      };
      line(t.header);
      for (const auto& r : t.rows) line(r);
      continue;
    }
    std::vector<std::size_t> width(t.header.size(), 0);
    for (std::size_t c = 0; c < t.header.size(); ++c) width[c] = t.header[c].size();
    for (const auto& r : t.rows) {
      for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        out << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << cells[c];
      }
      out << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
  }
}

// CSV text back into tables (the library writers emit CSV).
Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (first) {
      t.header = cells;
      first = false;
    } else {
      t.rows.push_back(cells);
    }
  }
  return t;
}

void emit(const RunConfig& cfg, const std::vector<Table>& tables) {
  const bool pretty = cfg.pretty || cfg.format == "pretty";
  if (cfg.out.empty()) {
    render(std::cout, tables, pretty);
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw std::runtime_error("cannot write " + cfg.out);
  render(f, tables, pretty);
}

chp::LoadResult load(const RunConfig& cfg, bool require_valid) {
  if (cfg.instance.empty()) throw UsageError("--instance is required");
  chp::LoadOptions opts;
  opts.default_pieces = cfg.pieces;
  opts.require_valid = require_valid;
  return chp::load_instance_file(cfg.instance, opts);
}

chp::MipOptions mip_options(const RunConfig& cfg) {
  chp::MipOptions o;
  o.gap_tol = cfg.gap_tol;
  o.node_limit = cfg.node_limit;
  return o;
}

void warn(const std::vector<chp::Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) std::cerr << chp::to_string(d) << '\n';
}

void trace_dp(const RunConfig& cfg, const chp::SystemInstance& inst, const chp::PriceVector& pi) {
  if (cfg.trace_dp.empty()) return;
  std::ofstream f(cfg.trace_dp);
  if (!f) throw std::runtime_error("cannot write " + cfg.trace_dp);
  for (const auto& gen : inst.generators) {
    f << "# generator " << gen.id << '\n';
    chp::write_dp_trace(chp::run_dp(gen, pi), f);
  }
}

int cmd_validate(const RunConfig& cfg) {
  const auto res = load(cfg, false);
  Table t{{"severity", "generator", "field", "message"}, {}};
  for (const auto& d : res.diagnostics) {
    t.rows.push_back({d.severity == chp::Severity::kError ? "error" : "warning", d.generator, d.field, d.message});
  }
  emit(cfg, {t});
  return chp::has_errors(res.diagnostics) ? kExitDomain : 0;
}

Table schedule_table(const chp::Schedule& schedule) {
  Table t{{"generator", "period", "u", "v", "x"}, {}};
  for (const auto& unit : schedule.units) {
    for (std::size_t s = 0; s < unit.u.size(); ++s) {
      t.rows.push_back({unit.id, std::to_string(s + 1), std::to_string(unit.u[s]), std::to_string(unit.v[s]),
                        chp::format_number(unit.x[s])});
    }
  }
  return t;
}

int cmd_solve(const RunConfig& cfg) {
  const auto res = load(cfg, true);
  warn(res.diagnostics);
  const auto& inst = res.instance;
  if (!cfg.dump_lp.empty()) chp::lp::dump_lp(chp::assemble_meuc(inst).lp, cfg.dump_lp);
  const auto sys = chp::solve_system(inst, mip_options(cfg));
  trace_dp(cfg, inst, chp::PriceVector::Zero(inst.horizon));
  Table summary{{"objective", "status", "nodes"},
                {{chp::format_number(sys.z_qip), chp::to_string(sys.mip.status), std::to_string(sys.mip.node_count)}}};
  emit(cfg, {summary, schedule_table(sys.schedule)});
  return sys.mip.status == chp::MipStatus::kOptimal ? 0 : kExitDomain;
}

int cmd_price(const RunConfig& cfg) {
  const auto res = load(cfg, true);
  warn(res.diagnostics);
  const auto& inst = res.instance;
  chp::PricingReport report;
  double objective = 0.0;
  if (cfg.method == "tlmp") {
    const auto sys = chp::solve_system(inst, mip_options(cfg));
    const auto r = chp::price_tlmp(inst, sys);
    if (!cfg.dump_lp.empty()) {
      auto lp2 = chp::build_2bin_system(inst);
      chp::fix_commitment(lp2, sys.schedule);
      chp::lp::dump_lp(lp2.lp, cfg.dump_lp);
    }
    report.method = chp::PricingMethod::kTlmp;
    report.prices = r.prices;
    objective = r.fixed_lp_objective;
  } else if (cfg.method == "chp") {
    if (!cfg.dump_lp.empty()) chp::lp::dump_lp(chp::assemble_meuc(inst).lp, cfg.dump_lp);
    const auto r = chp::price_chp(inst);
    report.method = chp::PricingMethod::kChp;
    report.prices = r.prices;
    objective = r.relaxation_objective;
  } else {
    throw UsageError("--method must be tlmp or chp");
  }
  trace_dp(cfg, inst, report.prices);
  std::ostringstream prices;
  chp::write_prices_csv(prices, {report});
  Table obj{{"method", "objective"}, {{chp::to_string(report.method), chp::format_number(objective)}}};
  emit(cfg, {parse_csv(prices.str()), obj});
  return 0;
}

int cmd_fuzz(const RunConfig& cfg) {
  chp::Rng rng(cfg.seed);
  Table t{{"trial", "check", "pass", "detail"}, {}};
  bool all = true;
  for (int i = 0; i < cfg.fuzz; ++i) {
    const int gens = std::uniform_int_distribution<int>(2, 4)(rng);
    const int horizon = std::uniform_int_distribution<int>(2, 6)(rng);
    const auto inst = chp::random_system(rng, gens, horizon);
    for (const auto& c : chp::check_system_invariants(inst, i + 1, mip_options(cfg))) {
      all = all && c.pass;
      t.rows.push_back({std::to_string(c.trial), c.name, c.pass ? "pass" : "fail", c.detail});
    }
  }
  emit(cfg, {t});
  return all ? 0 : kExitDomain;
}

int cmd_compare(const RunConfig& cfg) {
  if (cfg.fuzz > 0) return cmd_fuzz(cfg);
  const auto res = load(cfg, true);
  warn(res.diagnostics);
  const auto& inst = res.instance;
  if (!cfg.dump_lp.empty()) chp::lp::dump_lp(chp::assemble_meuc(inst).lp, cfg.dump_lp);
  const auto cmp = chp::compare(inst, mip_options(cfg));
  trace_dp(cfg, inst, cmp.reports.back().prices);
  std::ostringstream prices, uplifts, summary;
  chp::write_prices_csv(prices, cmp.reports);
  chp::write_uplift_csv(uplifts, cmp.reports);
  chp::write_summary_csv(summary, cmp.reports, cmp.gap_tm);
  emit(cfg, {parse_csv(prices.str()), parse_csv(uplifts.str()), parse_csv(summary.str())});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unit commitment pricing: TLMP and convex hull prices with uplift"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool needs_instance) {
    auto* opt = sub->add_option("--instance", cfg.instance, "Instance JSON file");
    if (needs_instance) opt->required();
    sub->add_option("--out", cfg.out, "Write output here instead of stdout");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "pretty"}));
    sub->add_flag("--pretty", cfg.pretty, "Same as --format pretty");
    sub->add_option("--pieces", cfg.pieces, "Tangent pieces for quadratic costs")->check(CLI::PositiveNumber);
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--gap-tol", cfg.gap_tol, "Absolute branch-and-bound gap")->check(CLI::NonNegativeNumber);
    sub->add_option("--node-limit", cfg.node_limit, "Branch-and-bound node limit")->check(CLI::PositiveNumber);
    sub->add_option("--dump-lp", cfg.dump_lp, "Write the LP in MPS form");
    sub->add_option("--trace-dp", cfg.trace_dp, "Write DP tables as CSV");
  };

  auto* validate = app.add_subcommand("validate", "Check an instance file");
  add_common(validate, true);
  auto* solve = app.add_subcommand("solve", "Solve the system commitment problem");
  add_common(solve, true);
  add_solver(solve);
  auto* price = app.add_subcommand("price", "Compute prices");
  add_common(price, true);
  add_solver(price);
  price->add_option("--method", cfg.method, "Pricing method")->check(CLI::IsMember({"tlmp", "chp"}));
  auto* comp = app.add_subcommand("compare", "TLMP versus convex hull pricing with uplifts");
  add_common(comp, false);
  add_solver(comp);
  comp->add_option("--fuzz", cfg.fuzz, "Run N random systems through the invariant checks");
  comp->add_option("--seed", cfg.seed, "Seed for --fuzz");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(cfg);
    if (*solve) return cmd_solve(cfg);
    if (*price) return cmd_price(cfg);
    if (*comp) {
      if (cfg.fuzz == 0 && cfg.instance.empty()) throw UsageError("--instance or --fuzz is required");
      return cmd_compare(cfg);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const chp::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const chp::InstanceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const chp::Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitDomain;
  } catch (const chp::lp::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
