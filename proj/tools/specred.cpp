// specred: batch front-end.  JSON (or edge-list) in, canonical JSON out.
//
// Exit codes: 0 computed-positive, 1 computed-negative (e.g. no state
// transfer, partition not equitable, demo invariant failed), 2 error.
// Errors land on stdout as {"context":..., "error":...} so pipelines always
// read one document.  Set SPECRED_LOG=1 for progress notes on stderr.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "specred/demos.hpp"
#include "specred/json_io.hpp"

using namespace specred;
using GR = GaussianRational;

namespace {

bool log_on() {
  const char* v = std::getenv("SPECRED_LOG");
  return v && *v && std::string(v) != "0";
}

void note(const std::string& msg) {
  if (log_on()) std::cerr << "specred: " << msg << "\n";
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<double> parse_times(const std::string& s) {
  std::vector<double> out;
  for (const std::string& item : split_csv(s)) {
    try {
      size_t used = 0;
      double t = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(t);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad time value '" + item + "'");
    }
  }
  return out;
}

// Uniform grid on [0, hi], endpoints included.
std::vector<double> grid_times(int n, double hi) {
  n = std::max(n, 2);
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(hi * i / (n - 1));
  return out;
}

void write_out(const Json& doc, const std::string& out_path) {
  std::string text = render_document(doc);
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw Error(ErrorCode::ParseError, "cannot write '" + out_path + "'");
  f << text;
}

Json feasibility_json(const HermitianFeasibility& f) {
  Json residues = Json::array();
  for (const auto& [pole, margin] : f.residues_psd)
    residues.push_back(Json{{"pole", scalar_json<Cx>(pole)}, {"psd_margin", margin}});
  return Json{{"feasible", f.feasible},
              {"limit_hermitian", f.limit_hermitian},
              {"poles_real", f.poles_real},
              {"poles_simple", f.poles_simple},
              {"residues", residues}};
}

Json checks_json(const demos::CheckList& c) {
  Json out = Json::array();
  for (const auto& [name, ok] : c.items) out.push_back(Json{{"name", name}, {"ok", ok}});
  return out;
}

// Demo summaries go to stderr so stdout stays one parseable document.
void print_checks(const demos::CheckList& c) {
  for (const auto& [name, ok] : c.items)
    std::cerr << (ok ? "pass" : "FAIL") << "  " << name << "\n";
}

struct Options {
  std::string input, partition;  // positional paths
  std::string backend = "exact";
  std::string subset, frame, times, out;
  Tolerances tol;
  int grid = 0;
  long seed = 0;  // reserved: nothing here randomizes, output ignores it
};

template <class F>
Json run_reduce(const Options& o) {
  LabeledMatrix<F> a = labeled_load<F>(o.input, o.tol);
  note("loaded " + std::to_string(a.entries.rows) + "-vertex matrix");
  return rm_json(reduce(a, split_csv(o.subset), o.tol));
}

template <class F>
Json run_greduce(const Options& o) {
  LabeledMatrix<F> a = labeled_load<F>(o.input, o.tol);
  Selector<F> sel = selector_from_json<F>(load_document(o.frame));
  if (!sel.is_frame()) {
    // A subset selector names coordinate columns; build the indicator frame.
    std::vector<int> idx = subset_indices(a, sel.subset);
    Mat<F> sigma(a.entries.rows, int(idx.size()), FieldTraits<F>::zero());
    for (size_t k = 0; k < idx.size(); ++k) sigma(idx[k], int(k)) = FieldTraits<F>::one();
    sel.frame = std::move(sigma);
  }
  return rm_json(reduce_frame(a, sel.frame, o.tol));
}

template <class F>
Json run_pfd(const Options& o) {
  RatMatrix<F> r = rm_from_json<F>(load_document(o.input), o.tol);
  return pfd_json(pfd_matrix(r, o.tol));
}

Json run_unfold_float(const Options& o) {
  RatMatrix<Cx> r = rm_from_json<Cx>(load_document(o.input), o.tol);
  HermitianFeasibility f = check_hermitian_feasibility(r, o.tol);
  note(f.feasible ? "hermitian-feasible; structured unfolding"
                  : "not hermitian-feasible; general unfolding");
  Unfolding<Cx> u = f.feasible ? unfold_hermitian(r, o.tol) : unfold_general(r, o.tol);
  Json doc = unfolding_json(u);
  doc["feasibility"] = feasibility_json(f);
  return doc;
}

Json run_unfold_exact(const Options& o) {
  RatMatrix<GR> r = rm_from_json<GR>(load_document(o.input), o.tol);
  return unfolding_json(unfold_general(r, o.tol));
}

Json run_hollow(const Options& o) {
  Unfolding<Cx> u = unfolding_from_json<Cx>(load_document(o.input), o.tol);
  return unfolding_json(hollow(u, u.matrix.hermitian, o.tol));
}

Json run_compress(const Options& o) {
  Unfolding<Cx> u = unfolding_from_json<Cx>(load_document(o.input), o.tol);
  return unfolding_json(compress_band(u, o.tol));
}

Json run_qwalk(const Options& o) {
  LabeledMatrix<Cx> a = labeled_load<Cx>(o.input, o.tol);
  std::vector<double> ts =
      o.times.empty() ? grid_times(o.grid > 0 ? o.grid : 50, M_PI) : parse_times(o.times);
  return walksample_json(restricted_walk(a, split_csv(o.subset), ts, o.tol));
}

int run_pst(const Options& o, Json& doc) {
  LabeledMatrix<Cx> a = labeled_load<Cx>(o.input, o.tol);
  std::vector<std::string> pair = split_csv(o.subset);
  if (pair.size() != 2)
    throw Error(ErrorCode::UnknownLabel, "--subset must name exactly two vertices");
  std::vector<PSTOutcome> candidates;
  if (!o.times.empty()) {
    for (double t : parse_times(o.times)) candidates.push_back(pst_check(a, pair[0], pair[1], t, o.tol));
  } else {
    // No times given: scan [0, 2*pi] for transfer maxima and refine each.
    candidates = pst_scan(a, pair[0], pair[1], 2 * M_PI, o.grid > 0 ? o.grid : 200, o.tol);
  }
  bool any = false;
  Json arr = Json::array();
  for (const PSTOutcome& c : candidates) {
    any = any || c.certified;
    arr.push_back(pst_json(c));
  }
  doc = Json{{"candidates", arr}, {"certified", any}};
  return any ? 0 : 1;
}

int run_divisor(const Options& o, Json& doc) {
  LabeledMatrix<Cx> a = labeled_load<Cx>(o.input, o.tol);
  VertexPartition pi = partition_from_json(load_document(o.partition));
  EquitableResult<Cx> eq = is_equitable(a, pi, o.tol);
  if (!eq.equitable) {
    doc = Json{{"equitable", false},
               {"witness", Json{{"block_row", eq.block_row},
                                {"block_col", eq.block_col},
                                {"vertex_u", eq.vertex_u},
                                {"vertex_v", eq.vertex_v},
                                {"sum_u", scalar_json<Cx>(eq.sum_u)},
                                {"sum_v", scalar_json<Cx>(eq.sum_v)}}}};
    return 1;
  }
  Mat<Cx> sym = symmetrized_divisor(a, pi, o.tol);
  doc = Json{{"equitable", true},
             {"divisor", mat_json(eq.divisor)},
             {"symmetrized", mat_json(sym)},
             {"is_reduction", divisor_is_reduction_check(a, pi, o.tol)}};
  if (a.hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(sym));
    Json eigs = Json::array();
    for (int i = 0; i < es.eigenvalues().size(); ++i) eigs.push_back(es.eigenvalues()(i));
    doc["eigenvalues"] = eigs;
  }
  return 0;
}

template <class F>
int run_walkgen(const Options& o, Json& doc) {
  LabeledMatrix<F> a = labeled_load<F>(o.input, o.tol);
  std::vector<std::string> s = split_csv(o.subset);
  const int len = o.grid > 0 ? o.grid : 8;
  WalkSeries<F> ret = walk_series_returning(a, s, len, o.tol);
  WalkSeries<F> star = walk_series_nonreturning(a, s, len, o.tol);
  bool ok = walk_identity_check(a, s, len, o.tol);
  Json rj = Json::array(), sj = Json::array();
  for (const auto& m : ret.coeffs) rj.push_back(mat_json(m));
  for (const auto& m : star.coeffs) sj.push_back(mat_json(m));
  doc = Json{{"subset", s},
             {"length", len},
             {"returning", rj},
             {"nonreturning", sj},
             {"identity_ok", ok}};
  return ok ? 0 : 1;
}

int run_demo_hypercube(const Options& o, Json& doc) {
  demos::HypercubeReport rep = demos::hypercube_demo(4, o.tol);
  print_checks(rep.checks);
  Json family = Json::array(), certs = Json::array();
  for (const auto& g : rep.family) family.push_back(labeled_json(g));
  for (const auto& c : rep.certificates) certs.push_back(pst_json(c));
  doc = Json{{"checks", checks_json(rep.checks)},
             {"cube", labeled_json(rep.cube)},
             {"family", family},
             {"certificates", certs}};
  return rep.checks.all_ok() ? 0 : 1;
}

int run_demo_weighted(const Options& o, Json& doc) {
  demos::WeightedTransferReport rep = demos::weighted_transfer_demo(o.tol);
  print_checks(rep.checks);
  doc = Json{{"checks", checks_json(rep.checks)},
             {"matrix", labeled_json(rep.cleaned.matrix)},
             {"subset", rep.cleaned.subset},
             {"reduction", rm_json(rep.reduction_exact)},
             {"spectrum", rep.spectrum},
             {"pst", pst_json(rep.pst)},
             {"metrics", Json{{"spectrum_dev", rep.spectrum_dev},
                              {"walk_dev", rep.walk_dev},
                              {"gauge_dev", rep.gauge_dev},
                              {"diag_max", rep.diag_max},
                              {"band_leak", rep.band_leak}}}};
  return rep.checks.all_ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isospectral reductions, unfoldings, and quantum walks"};
  app.require_subcommand(1);

  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol-eps", o.tol.eps, "scalar/entry comparison tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--tol-delta", o.tol.delta, "root clustering tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--tol-pole", o.tol.pole, "pole proximity tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--tol-psd", o.tol.psd, "residue PSD margin tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--tol-rank", o.tol.rank, "numerical rank cutoff")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--seed", o.seed, "reserved; output does not depend on it")
        ->capture_default_str();
    sub->add_option("--out", o.out, "write the result document here instead of stdout");
  };
  auto add_backend = [&](CLI::App* sub) {
    sub->add_option("--backend", o.backend, "exact rationals or double precision")
        ->check(CLI::IsMember({"exact", "float"}))
        ->capture_default_str();
  };
  auto add_input = [&](CLI::App* sub, const char* what) {
    sub->add_option("input", o.input, what)->required();
  };

  CLI::App* c_reduce = app.add_subcommand("reduce", "isospectral reduction onto a vertex subset");
  add_input(c_reduce, "labeled matrix (JSON or edge list)");
  c_reduce->add_option("--subset", o.subset, "comma-separated vertex labels")->required();
  add_backend(c_reduce);
  add_common(c_reduce);

  CLI::App* c_greduce = app.add_subcommand("greduce", "generalized reduction over a column frame");
  add_input(c_greduce, "labeled matrix (JSON or edge list)");
  c_greduce->add_option("--frame", o.frame, "selector document: {\"frame\": rows} or {\"subset\": labels}")
      ->required();
  add_backend(c_greduce);
  add_common(c_greduce);

  CLI::App* c_pfd = app.add_subcommand("pfd", "partial fraction decomposition of a reduction");
  add_input(c_pfd, "rational matrix JSON");
  add_backend(c_pfd);
  add_common(c_pfd);

  CLI::App* c_unfold = app.add_subcommand(
      "unfold", "scalar matrix reducing to a given rational matrix (float tries hermitian first)");
  add_input(c_unfold, "rational matrix JSON");
  add_backend(c_unfold);
  add_common(c_unfold);

  CLI::App* c_hollow = app.add_subcommand("hollow", "zero the diagonal by a tail similarity");
  add_input(c_hollow, "unfolding JSON");
  add_common(c_hollow);

  CLI::App* c_compress = app.add_subcommand("compress", "band-compress the tail to block-tridiagonal");
  add_input(c_compress, "unfolding JSON");
  add_common(c_compress);

  CLI::App* c_qwalk = app.add_subcommand("qwalk", "sample the restricted continuous-time walk");
  add_input(c_qwalk, "labeled matrix (JSON or edge list)");
  c_qwalk->add_option("--subset", o.subset, "comma-separated vertex labels")->required();
  c_qwalk->add_option("--times", o.times, "comma-separated sample times");
  c_qwalk->add_option("--grid", o.grid, "uniform sample count on [0, pi] when --times is absent");
  add_common(c_qwalk);

  CLI::App* c_pst = app.add_subcommand("pst", "check or search for perfect state transfer");
  add_input(c_pst, "labeled matrix (JSON or edge list)");
  c_pst->add_option("--subset", o.subset, "exactly two vertex labels: source,target")->required();
  c_pst->add_option("--times", o.times, "check these times; otherwise scan [0, 2*pi]");
  c_pst->add_option("--grid", o.grid, "scan grid resolution (default 200)");
  add_common(c_pst);

  CLI::App* c_divisor = app.add_subcommand("divisor", "equitable-partition divisor and its checks");
  add_input(c_divisor, "labeled matrix (JSON or edge list)");
  c_divisor->add_option("partition", o.partition, "partition JSON: {\"classes\": [[labels]...]}")
      ->required();
  add_common(c_divisor);

  CLI::App* c_walkgen = app.add_subcommand("walkgen", "walk generating series and their identity");
  add_input(c_walkgen, "labeled matrix (JSON or edge list)");
  c_walkgen->add_option("--subset", o.subset, "comma-separated vertex labels")->required();
  c_walkgen->add_option("--grid", o.grid, "series length (default 8)");
  add_backend(c_walkgen);
  add_common(c_walkgen);

  CLI::App* c_demo_q4 = app.add_subcommand(
      "demo-hypercube", "4-cube state transfer family: variants, certificates, invariants");
  add_common(c_demo_q4);

  CLI::App* c_demo_w = app.add_subcommand(
      "demo-weighted-pst", "weighted chain with transfer between its first two vertices");
  add_common(c_demo_w);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << e.what() << "\n";
    std::cout << render_document(Json{{"error", "UsageError"}, {"context", e.what()}});
    return 2;
  }

  try {
    const bool exact = o.backend == "exact";
    Json doc;
    int code = 0;
    if (c_reduce->parsed()) {
      doc = exact ? run_reduce<GR>(o) : run_reduce<Cx>(o);
    } else if (c_greduce->parsed()) {
      doc = exact ? run_greduce<GR>(o) : run_greduce<Cx>(o);
    } else if (c_pfd->parsed()) {
      doc = exact ? run_pfd<GR>(o) : run_pfd<Cx>(o);
    } else if (c_unfold->parsed()) {
      doc = exact ? run_unfold_exact(o) : run_unfold_float(o);
    } else if (c_hollow->parsed()) {
      doc = run_hollow(o);
    } else if (c_compress->parsed()) {
      doc = run_compress(o);
    } else if (c_qwalk->parsed()) {
      doc = run_qwalk(o);
    } else if (c_pst->parsed()) {
      code = run_pst(o, doc);
    } else if (c_divisor->parsed()) {
      code = run_divisor(o, doc);
    } else if (c_walkgen->parsed()) {
      code = exact ? run_walkgen<GR>(o, doc) : run_walkgen<Cx>(o, doc);
    } else if (c_demo_q4->parsed()) {
      code = run_demo_hypercube(o, doc);
    } else if (c_demo_w->parsed()) {
      code = run_demo_weighted(o, doc);
    }
    write_out(doc, o.out);
    return code;
  } catch (const Error& e) {
    std::string what = e.what();
    std::string prefix = std::string(error_name(e.code())) + ": ";
    if (what.rfind(prefix, 0) == 0) what = what.substr(prefix.size());
    std::cerr << "specred: " << error_name(e.code()) << ": " << what << "\n";
    std::cout << render_document(Json{{"error", error_name(e.code())}, {"context", what}});
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "specred: " << e.what() << "\n";
    std::cout << render_document(Json{{"error", "InternalError"}, {"context", e.what()}});
    return 2;
  }
}
