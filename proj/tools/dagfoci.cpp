#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dagfoci/dagfoci.hpp"
#include "dagfoci/report.hpp"

namespace {

using namespace dagfoci;

struct CommonOpts {
  std::uint64_t seed = 0;
  double alpha = 0.05;
  std::size_t n_perms = 100;
  unsigned jobs = 0;        // 0 = hardware concurrency
  std::size_t max_boundary = 0;  // 0 = unbounded
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--seed", o.seed, "base seed for all random streams")
      ->envname("DAGFOCI_SEED");
  sub->add_option("--alpha", o.alpha, "independence test level, in (0, 1)")
      ->envname("DAGFOCI_ALPHA");
  sub->add_option("--n-perms", o.n_perms, "permutations per independence test")
      ->envname("DAGFOCI_N_PERMS");
  sub->add_option("--jobs", o.jobs, "worker threads (0 = hardware)")
      ->envname("DAGFOCI_JOBS");
  sub->add_option("--max-boundary", o.max_boundary,
                  "cap on selected boundary size (0 = unbounded)")
      ->envname("DAGFOCI_MAX_BOUNDARY");
}

std::size_t boundary_cap(const CommonOpts& o) {
  return o.max_boundary == 0 ? std::numeric_limits<std::size_t>::max()
                             : o.max_boundary;
}

report::RunConfig run_config(const CommonOpts& o) {
  report::RunConfig c;
  c.seed = o.seed;
  c.alpha = o.alpha;
  c.n_perms = o.n_perms;
  c.jobs = o.jobs;
  c.max_boundary = o.max_boundary;
  return c;
}

void apply(const CommonOpts& o, const char* command) {
  if (!(o.alpha > 0.0 && o.alpha < 1.0))
    throw Error("alpha must be in (0, 1)");
  if (o.n_perms < 1) throw Error("need at least 1 permutation");
  parallel::set_workers(o.jobs);
  std::cout << "# dagfoci " << command << " seed=" << o.seed
            << " alpha=" << o.alpha << " n_perms=" << o.n_perms
            << " jobs=" << o.jobs << "\n";
}

void write_json(const std::string& path, const report::json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << doc.dump(2) << "\n";
  if (!out) throw Error("write failed for '" + path + "'");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

std::string set_text(const std::vector<std::size_t>& cols,
                     const std::vector<std::string>& names) {
  std::string s = "{";
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (k) s += ", ";
    s += names[cols[k]];
  }
  return s + "}";
}

void print_boundary(const MarkovBoundaryEstimate& b,
                    const std::vector<std::string>& names) {
  for (const auto& st : b.trajectory)
    std::cout << "step " << st.step << ": + " << names[st.column]
              << " (T = " << st.t_value << ")\n";
  std::cout << "boundary(" << names[b.target]
            << ") = " << set_text(b.selected, names) << "\n";
}

void print_parental(const ParentalSets& p,
                    const std::vector<std::string>& names,
                    const std::string& target) {
  std::cout << "verdict: " << report::verdict_name(p.verdict) << "\n";
  if (p.verdict == Verdict::unique) {
    std::cout << "parents(" << target << ") = " << set_text(p.sets[0], names)
              << "\n";
  } else if (p.verdict == Verdict::singletons) {
    std::cout << "candidate sets:";
    for (const auto& s : p.sets) std::cout << " " << set_text(s, names);
    std::cout << "\n";
  } else {
    std::cout << kUndetectableMessage << "\n";
  }
}

sem::DagSpec load_spec(const std::string& builtin_name,
                       const std::string& spec_path, double violation_alpha) {
  if (!builtin_name.empty() && !spec_path.empty())
    throw Error("give either --builtin or --spec, not both");
  if (!builtin_name.empty()) return sem::builtin(builtin_name, violation_alpha);
  if (spec_path.empty()) throw Error("need --builtin or --spec");
  std::ifstream in(spec_path, std::ios::binary);
  if (!in) throw Error("cannot open '" + spec_path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return sem::parse_dag_spec(buf.str());
}

int run(int argc, char** argv) {
  CLI::App app{"non-parametric local causal discovery around a target column"};
  app.require_subcommand(1);

  // codec -----------------------------------------------------------------
  auto* c_codec = app.add_subcommand(
      "codec", "conditional dependence coefficient of named columns");
  std::string codec_csv, codec_target, codec_env, codec_out;
  std::vector<std::string> codec_z, codec_given;
  CommonOpts codec_opts;
  c_codec->add_option("data", codec_csv, "input csv")->required();
  c_codec->add_option("--target", codec_target, "response column")->required();
  c_codec->add_option("--z", codec_z, "predictor columns")
      ->required()
      ->delimiter(',');
  c_codec->add_option("--given", codec_given, "conditioning columns")
      ->delimiter(',');
  c_codec->add_option("--env-column", codec_env, "environment tag column");
  c_codec->add_option("--out", codec_out, "write a json report");
  add_common(c_codec, codec_opts);

  // foci ------------------------------------------------------------------
  auto* c_foci = app.add_subcommand(
      "foci", "stepwise Markov boundary selection for a target column");
  std::string foci_csv, foci_target, foci_env, foci_out;
  CommonOpts foci_opts;
  c_foci->add_option("data", foci_csv, "input csv")->required();
  c_foci->add_option("--target", foci_target, "target column")->required();
  c_foci->add_option("--env-column", foci_env, "environment tag column");
  c_foci->add_option("--out", foci_out, "write a json report");
  add_common(c_foci, foci_opts);

  // dagfoci ---------------------------------------------------------------
  auto* c_dag = app.add_subcommand(
      "dagfoci", "parental set identification for a target column");
  std::string dag_csv, dag_target, dag_env, dag_out;
  CommonOpts dag_opts;
  c_dag->add_option("data", dag_csv, "input csv")->required();
  c_dag->add_option("--target", dag_target, "target column")->required();
  c_dag->add_option("--env-column", dag_env, "environment tag column");
  c_dag->add_option("--out", dag_out, "write a json report");
  add_common(c_dag, dag_opts);

  // intervene ---------------------------------------------------------------
  auto* c_intv = app.add_subcommand(
      "intervene", "refine parental sets with interventional data");
  std::string intv_csv, intv_obs_file, intv_int_file, intv_env, intv_obs_env,
      intv_int_env, intv_target, intv_out;
  CommonOpts intv_opts;
  c_intv->add_option("data", intv_csv,
                     "csv with an environment column (with --env-column)");
  c_intv->add_option("--obs", intv_obs_file, "observational csv");
  c_intv->add_option("--int", intv_int_file, "interventional csv");
  c_intv->add_option("--env-column", intv_env, "environment tag column");
  c_intv->add_option("--obs-env", intv_obs_env, "observational tag");
  c_intv->add_option("--int-env", intv_int_env, "interventional tag");
  c_intv->add_option("--target", intv_target, "target column")->required();
  c_intv->add_option("--out", intv_out, "write a json report");
  add_common(c_intv, intv_opts);

  // simulate ----------------------------------------------------------------
  auto* c_sim = app.add_subcommand(
      "simulate", "sample a structural equation model to csv");
  std::string sim_builtin, sim_spec, sim_do, sim_out;
  double sim_violation_alpha = 0.0, sim_do_shift = 0.0, sim_do_scale = 1.0;
  std::size_t sim_n = 1000;
  bool sim_print_spec = false;
  CommonOpts sim_opts;
  c_sim->add_option("--builtin", sim_builtin,
                    "builtin model: example1, example2, codec_violation");
  c_sim->add_option("--spec", sim_spec, "model spec file");
  c_sim->add_option("--violation-alpha", sim_violation_alpha,
                    "noise level of the codec_violation builtin");
  c_sim->add_option("--n", sim_n, "sample size");
  c_sim->add_option("--do", sim_do, "intervene on this node before sampling");
  c_sim->add_option("--do-shift", sim_do_shift, "mean of the do() law");
  c_sim->add_option("--do-scale", sim_do_scale, "scale of the do() law");
  c_sim->add_flag("--print-spec", sim_print_spec,
                  "print the spec text instead of sampling");
  c_sim->add_option("--out", sim_out, "output csv (default: stdout)");
  add_common(c_sim, sim_opts);

  // benchmark ---------------------------------------------------------------
  auto* c_bench = app.add_subcommand(
      "benchmark", "repeated recovery runs on a simulated model");
  std::string bench_builtin, bench_spec, bench_target, bench_out, bench_sweep;
  double bench_violation_alpha = 0.0;
  std::vector<std::size_t> bench_grid;
  std::vector<double> bench_alphas;
  std::size_t bench_runs = 100, bench_sweep_n = 10000;
  CommonOpts bench_opts;
  c_bench->add_option("--builtin", bench_builtin, "builtin model");
  c_bench->add_option("--spec", bench_spec, "model spec file");
  c_bench->add_option("--violation-alpha", bench_violation_alpha,
                      "noise level of the codec_violation builtin");
  c_bench->add_option("--target", bench_target, "target node");
  c_bench->add_option("--n-grid", bench_grid, "sample sizes")->delimiter(',');
  c_bench->add_option("--runs", bench_runs, "runs per sample size");
  c_bench->add_option("--sweep", bench_sweep,
                      "run a named sweep instead: codec-gap");
  c_bench->add_option("--alphas", bench_alphas,
                      "noise grid for --sweep codec-gap")
      ->delimiter(',');
  c_bench->add_option("--sweep-n", bench_sweep_n,
                      "sample size for --sweep codec-gap");
  c_bench->add_option("--out", bench_out,
                      "output prefix: writes <out>.json and <out>_plot.csv");
  add_common(c_bench, bench_opts);

  CLI11_PARSE(app, argc, argv);

  if (c_codec->parsed()) {
    apply(codec_opts, "codec");
    Dataset d = load_csv(codec_csv, codec_env);
    ColumnView y = d.column(d.column_index(codec_target));
    std::vector<ColumnView> z, x;
    for (const auto& name : codec_z) z.push_back(d.column(d.column_index(name)));
    for (const auto& name : codec_given)
      x.push_back(d.column(d.column_index(name)));
    CodecValue v = x.empty()
                       ? codec_unconditional(y, MatrixView(z), codec_opts.seed)
                       : codec_conditional(y, MatrixView(z), MatrixView(x),
                                           codec_opts.seed);
    std::cout << "t = " << v.t << "\n"
              << "numerator = " << v.numerator
              << "  denominator = " << v.denominator << "  n = " << v.n_used
              << "  conditioning_size = " << v.conditioning_size << "\n";
    if (!codec_out.empty()) {
      auto doc = report::document("codec", run_config(codec_opts));
      doc["target"] = codec_target;
      doc["z"] = codec_z;
      doc["given"] = codec_given;
      doc["codec"] = report::codec_json(v);
      write_json(codec_out, doc);
    }
    return 0;
  }

  if (c_foci->parsed()) {
    apply(foci_opts, "foci");
    Dataset d = load_csv(foci_csv, foci_env);
    std::size_t target = d.column_index(foci_target);
    MarkovBoundaryEstimate b = foci_select(d, select_all_but(d, target),
                                           foci_opts.seed,
                                           boundary_cap(foci_opts));
    print_boundary(b, d.names);
    if (!foci_out.empty()) {
      auto doc = report::document("foci", run_config(foci_opts));
      doc["boundary"] = report::boundary_json(b, d.names);
      write_json(foci_out, doc);
    }
    return 0;
  }

  if (c_dag->parsed()) {
    apply(dag_opts, "dagfoci");
    Dataset d = load_csv(dag_csv, dag_env);
    std::size_t target = d.column_index(dag_target);
    ParentalSets p = dag_foci(d, target, dag_opts.n_perms, dag_opts.alpha,
                              dag_opts.seed, boundary_cap(dag_opts));
    print_parental(p, d.names, dag_target);
    if (!dag_out.empty()) {
      auto doc = report::document("dagfoci", run_config(dag_opts));
      doc["target"] = dag_target;
      doc["result"] = report::parental_json(p, d.names);
      write_json(dag_out, doc);
    }
    return 0;
  }

  if (c_intv->parsed()) {
    apply(intv_opts, "intervene");
    Dataset obs, intv;
    if (!intv_obs_file.empty() || !intv_int_file.empty()) {
      if (intv_obs_file.empty() || intv_int_file.empty())
        throw Error("need both --obs and --int");
      obs = load_csv(intv_obs_file);
      intv = load_csv(intv_int_file);
    } else {
      if (intv_csv.empty() || intv_env.empty() || intv_obs_env.empty() ||
          intv_int_env.empty())
        throw Error(
            "need either --obs/--int files or a csv with --env-column, "
            "--obs-env and --int-env");
      Dataset all = load_csv(intv_csv, intv_env);
      obs = filter_environment(all, intv_obs_env);
      intv = filter_environment(all, intv_int_env);
    }
    std::size_t target = obs.column_index(intv_target);
    InterventionalResult r = dag_foci_interventional(
        obs, intv, target, intv_opts.n_perms, intv_opts.alpha, intv_opts.seed,
        boundary_cap(intv_opts));
    print_parental(r.observational, obs.names, intv_target);
    std::cout << "interventional boundary = "
              << set_text(r.interventional_boundary.selected, obs.names)
              << "\n";
    std::cout << "refined parental sets:";
    for (const auto& s : r.refined_parents)
      std::cout << " " << set_text(s, obs.names);
    std::cout << "\nchildren: " << set_text(r.children, obs.names) << "\n";
    if (!intv_out.empty()) {
      auto doc = report::document("intervene", run_config(intv_opts));
      doc["target"] = intv_target;
      doc["result"] = report::interventional_json(r, obs.names);
      write_json(intv_out, doc);
    }
    return 0;
  }

  if (c_sim->parsed()) {
    apply(sim_opts, "simulate");
    sem::DagSpec spec = load_spec(sim_builtin, sim_spec, sim_violation_alpha);
    if (!sim_do.empty())
      spec = sem::do_intervene(spec, sim_do, {sim_do_shift, sim_do_scale});
    if (sim_print_spec) {
      std::cout << sem::print_dag_spec(spec);
      return 0;
    }
    Dataset d = sem::sample(spec, sim_n, sim_opts.seed);
    if (sim_out.empty())
      std::cout << to_csv(d);
    else
      save_csv(d, sim_out);
    return 0;
  }

  if (c_bench->parsed()) {
    apply(bench_opts, "benchmark");
    if (bench_sweep == "codec-gap") {
      if (bench_alphas.empty())
        bench_alphas = {0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0};
      auto points = codec_gap_sweep(bench_alphas, bench_sweep_n,
                                    bench_opts.seed);
      std::string csv = "alpha,t_grandparent,t_parent_max\n";
      std::cout << "alpha  t_grandparent  t_parent_max\n";
      char line[128];
      for (const auto& p : points) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", p.alpha,
                      p.t_grandparent, p.t_parent_max);
        csv += line;
        std::cout << p.alpha << "  " << p.t_grandparent << "  "
                  << p.t_parent_max << "\n";
      }
      if (!bench_out.empty()) {
        auto doc = report::document("benchmark", run_config(bench_opts));
        doc["sweep"] = "codec-gap";
        doc["n"] = bench_sweep_n;
        doc["points"] = report::sweep_json(points);
        write_json(bench_out + ".json", doc);
        write_text(bench_out + "_plot.csv", csv);
      }
      return 0;
    }
    if (!bench_sweep.empty()) throw Error("unknown sweep '" + bench_sweep + "'");
    if (bench_target.empty()) throw Error("benchmark needs --target");
    if (bench_grid.empty()) throw Error("benchmark needs --n-grid");
    sem::DagSpec spec =
        load_spec(bench_builtin, bench_spec, bench_violation_alpha);
    BenchmarkResult res =
        benchmark(spec, bench_target, bench_grid, bench_runs,
                  bench_opts.n_perms, bench_opts.alpha, bench_opts.seed,
                  boundary_cap(bench_opts));
    std::vector<std::string> names;
    for (const auto& node : spec.nodes) names.push_back(node.name);
    std::cout << "true parents: " << set_text(res.truth, names) << "\n";
    std::cout << "n  exact  non_unique  fp_runs  mean_false  mean_missing  "
                 "mean_jaccard\n";
    std::string csv =
        "n,exact_count,non_unique_count,false_positive_runs,mean_false,"
        "mean_missing,mean_jaccard\n";
    char line[256];
    for (const auto& s : res.by_n) {
      std::snprintf(line, sizeof(line), "%zu,%zu,%zu,%zu,%.17g,%.17g,%.17g\n",
                    s.n, s.exact_count, s.non_unique_count,
                    s.false_positive_runs, s.mean_false, s.mean_missing,
                    s.mean_jaccard);
      csv += line;
      std::cout << s.n << "  " << s.exact_count << "  " << s.non_unique_count
                << "  " << s.false_positive_runs << "  " << s.mean_false
                << "  " << s.mean_missing << "  " << s.mean_jaccard << "\n";
    }
    if (!bench_out.empty()) {
      auto doc = report::document("benchmark", run_config(bench_opts));
      doc["benchmark"] = report::benchmark_json(res, names);
      write_json(bench_out + ".json", doc);
      write_text(bench_out + "_plot.csv", csv);
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
