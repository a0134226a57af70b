// Command-line front end for the subspace perturbation library.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "subpert/subpert.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace subpert;

namespace {

enum Exit { kOk = 0, kCondition = 2, kViolation = 3, kIo = 4 };

struct Globals {
  bool json = false;
  double tol = kNormalityTol;
  std::string emit_csv;
};

json number(double x) {
  if (std::isfinite(x)) return x;
  return io::fmt(x);
}

json one_based(const std::vector<Eigen::Index>& idx) {
  json a = json::array();
  for (auto i : idx) a.push_back(i + 1);
  return a;
}

json one_based(const std::vector<std::size_t>& idx) {
  json a = json::array();
  for (auto i : idx) a.push_back(i + 1);
  return a;
}

json bound_row(const BoundEntry& b) {
  json o;
  o["name"] = b.name;
  o["value"] = number(b.value);
  o["condition_ok"] = b.condition_ok;
  o["vacuous"] = b.vacuous;
  if (!b.note.empty()) o["note"] = b.note;
  return o;
}

std::string scalar_text(const json& v) {
  if (v.is_number_float()) return io::fmt(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// Key-TAB-value lines. Arrays of scalars become comma lists; arrays of
// objects become one tab-separated line per object.
void render_text(const json& doc, std::ostream& out) {
  for (const auto& [key, v] : doc.items()) {
    if (v.is_array() && !v.empty() && v.front().is_object()) {
      for (const auto& row : v) {
        std::string line;
        for (const auto& [k2, cell] : row.items()) {
          if (!line.empty()) line += '\t';
          line += scalar_text(cell);
        }
        out << line << '\n';
      }
    } else if (v.is_array()) {
      std::string line;
      for (const auto& cell : v) {
        if (!line.empty()) line += ',';
        line += scalar_text(cell);
      }
      out << key << '\t' << line << '\n';
    } else if (v.is_object()) {
      for (const auto& [k2, cell] : v.items())
        out << key << '.' << k2 << '\t' << scalar_text(cell) << '\n';
    } else {
      out << key << '\t' << scalar_text(v) << '\n';
    }
  }
}

void emit(const Globals& g, const json& doc) {
  if (g.json)
    std::cout << doc.dump(2) << '\n';
  else
    render_text(doc, std::cout);
}

void emit_csv(const Globals& g, const std::string& name,
              const std::string& text) {
  if (g.emit_csv.empty()) return;
  fs::create_directories(g.emit_csv);
  io::write_file(fs::path(g.emit_csv) / name, text);
}

std::vector<Eigen::Index> parse_index_csv(const std::string& text) {
  std::vector<Eigen::Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<Eigen::Index>(v));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad index '" + item + "'");
    }
  }
  return out;
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Format:
    case ErrorCode::Io:
      return kIo;
    default:
      return kCondition;
  }
}

// ---- subcommands ----------------------------------------------------------

int run_dsp(const Globals& g, const std::string& a_path,
            const std::string& b_path) {
  const auto x = OrthonormalFrame(io::read_matrix(a_path));
  const auto y = OrthonormalFrame(io::read_matrix(b_path));
  json doc;
  doc["dsp"] = dsp_projector(x, y);
  doc["dsp_overlap"] = dsp_overlap(x, y);
  if (x.q() < x.n()) doc["dsp_complement"] = dsp_complement(complement_frame(x), y);
  emit(g, doc);
  return kOk;
}

int run_partition(const Globals& g, const std::string& p_path,
                  const std::string& q_path, const std::string& r_path) {
  const auto p = io::read_points(p_path);
  const auto q = io::read_points(q_path);
  const auto r = io::read_points(r_path);
  const auto check = sep_preserving_check(p, q, r);
  json doc;
  doc["sep_pq"] = check.sep_pq;
  doc["hausdorff_pq_r"] = check.hausdorff_pq_r;
  doc["margin"] = check.margin;
  doc["holds_full"] = check.holds_full;
  doc["holds_simple"] = check.holds_simple;
  if (!check.holds_full) {
    doc["error"] = "ConditionViolated";
    emit(g, doc);
    return kCondition;
  }
  const auto part = sep_preserving_partition(p, q, r);
  doc["p_tilde"] = one_based(part.p_tilde);
  doc["q_tilde"] = one_based(part.q_tilde);
  doc["new_sep_lower_bound"] = part.new_sep_lower_bound;
  emit(g, doc);
  return kOk;
}

int run_spectrum(const Globals& g, const std::string& path) {
  const auto sys = decompose_normal(io::read_matrix(path), g.tol);
  emit_csv(g, "spectrum.csv", io::spectrum_csv(sys.eigenvalues));
  if (g.json) {
    json doc;
    doc["n"] = sys.n;
    json vals = json::array();
    for (const auto& z : sys.eigenvalues) vals.push_back({z.real(), z.imag()});
    doc["eigenvalues"] = vals;
    doc["hermitian"] = sys.hermitian;
    doc["max_residual"] = sys.max_residual;
    emit(g, doc);
  } else {
    std::cout << io::format_spectrum(sys.eigenvalues);
  }
  return kOk;
}

struct BoundsArgs {
  std::string base, perturbed, set_a, set_a_tilde;
  std::string mode = "all";
  std::string kappa = "zero";
};

int run_bounds(const Globals& g, const BoundsArgs& args) {
  const CMatrix m = io::read_matrix(args.base);
  const CMatrix mt = io::read_matrix(args.perturbed);
  const auto sys = decompose_normal(m, g.tol);
  const auto sys_t = decompose_normal(mt, g.tol);
  if (sys.n != sys_t.n) {
    throw Error(ErrorCode::DimensionMismatch, "matrices differ in size");
  }
  const CMatrix mdiff = mt - m;
  const auto a = IndexPartition::from_one_based(sys.n, parse_index_csv(args.set_a));
  const auto kappa = args.kappa == "tightest" ? KappaPolicy::Mode::Tightest
                                              : KappaPolicy::Mode::Zero;

  std::string a_tilde_source = "given";
  std::optional<IndexPartition> a_t;
  if (!args.set_a_tilde.empty()) {
    a_t = IndexPartition::from_one_based(sys.n, parse_index_csv(args.set_a_tilde));
  } else {
    try {
      a_t = hat_partition(sys, sys_t, mdiff, a);
      a_tilde_source = "hat";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::GapConditionViolated) throw;
      if (binomial_saturating(static_cast<std::size_t>(sys.n),
                              static_cast<std::size_t>(a.q()),
                              kDefaultSearchLimit) <= kDefaultSearchLimit) {
        a_t = search_closest_invariant(sys_t, eigen_frame(sys, a.set_a()), a.q(),
                                       SearchMode::Exact)
                  .a_tilde;
        a_tilde_source = "exact-closest";
      } else {
        a_t = a;
        a_tilde_source = "same-as-a";
      }
    }
  }

  BoundSelection sel{false, false, false, false};
  if (args.mode == "all") sel = {true, true, true, true};
  if (args.mode == "full") sel.full = true;
  if (args.mode == "simplified") sel.simplified = true;
  if (args.mode == "dk") sel.davis_kahan = true;
  if (args.mode == "tilde-free") sel.tilde_free = true;
  const bool tilde_free_only = args.mode == "tilde-free";
  const BoundSelection main_sel{sel.full, sel.simplified, sel.davis_kahan, false};

  const auto ev = evaluate_bounds(sys, sys_t, mdiff, a, *a_t, main_sel, kappa);
  emit_csv(g, "spectrum_base.csv", io::spectrum_csv(sys.eigenvalues));
  emit_csv(g, "spectrum_perturbed.csv", io::spectrum_csv(sys_t.eigenvalues));

  json doc;
  doc["lhs_dsp"] = ev.report.lhs_dsp;
  doc["a"] = one_based(a.set_a());
  doc["a_tilde"] = one_based(a_t->set_a());
  doc["a_tilde_source"] = a_tilde_source;
  json rows = json::array();
  for (const auto& b : ev.report.bounds) rows.push_back(bound_row(b));
  auto violations = ev.report.violations();

  if (sel.tilde_free) {
    try {
      const auto tf = bound_tilde_free(sys, sys_t, mdiff, a);
      doc["tilde_free_a_hat"] = one_based(tf.a_hat.set_a());
      doc["tilde_free_lhs_dsp"] = tf.lhs_dsp;
      for (const auto& b : tf.bounds) {
        rows.push_back(bound_row(b));
        if (b.condition_ok && !BoundReport::within(tf.lhs_dsp, b.value))
          violations.push_back(b.name);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::GapConditionViolated) throw;
      if (tilde_free_only) throw;
      doc["tilde_free_gap_margin"] = e.value();
      for (const char* name : {"tilde_free_part1_fine", "tilde_free_part1_coarse",
                               "tilde_free_part2"})
        rows.push_back(bound_row(make_entry(name, kInf, false, "GapConditionViolated")));
    }
  }
  if (g.json) {
    doc["bounds"] = rows;
  } else {
    doc["bounds"] = json::array();
    for (auto row : rows) {
      row.erase("note");
      doc["bounds"].push_back(row);
    }
  }
  doc["violations"] = violations.size();
  emit(g, doc);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << "inequality violated: " << v << '\n';
    return kViolation;
  }
  return kOk;
}

int run_search(const Globals& g, const std::string& perturbed,
               const std::string& target, int q, bool exact) {
  const auto sys_t = decompose_normal(io::read_matrix(perturbed), g.tol);
  const auto frame = OrthonormalFrame(io::read_matrix(target));
  const auto res = search_closest_invariant(
      sys_t, frame, q, exact ? SearchMode::Exact : SearchMode::Heuristic);
  json doc;
  doc["a_tilde"] = one_based(res.a_tilde.set_a());
  doc["dsp"] = res.dsp;
  doc["method"] = res.method;
  emit(g, doc);
  return kOk;
}

int run_graph_audit(const Globals& g, const std::string& graph_path,
                    const std::string& perturbed_path,
                    const std::string& cut_path) {
  const auto base = io::read_graph(graph_path);
  const auto pert = io::read_graph(perturbed_path);
  const auto cut = io::read_cut(cut_path);
  require_edge_superset(base, pert, cut);
  const auto l = laplacian_spectrum(base);
  const auto lt = laplacian_spectrum(pert);
  const auto clusters = cluster_couplings(pert, cut);
  emit_csv(g, "spectrum_base.csv", io::spectrum_csv(l.eigenvalues));
  emit_csv(g, "spectrum_perturbed.csv", io::spectrum_csv(lt.eigenvalues));
  emit_csv(g, "clusters.csv", io::cluster_csv(clusters));

  json doc;
  doc["n"] = cut.n();
  doc["q"] = cut.q();
  bool violated = false;
  const auto ident = residual_identity_check(base, pert, cut);
  json id_rows = json::array();
  for (const auto& r : ident) {
    id_rows.push_back({{"row", "residual_identity"},
                       {"cluster", r.cluster + 1},
                       {"lhs", r.lhs},
                       {"rhs", r.rhs},
                       {"ok", r.ok}});
    violated = violated || !r.ok;
  }
  json sw_rows = json::array();
  for (int h = 0; h < cut.q(); ++h) {
    const auto s = coupling_sandwich(h, cut, pert);
    sw_rows.push_back({{"row", "coupling_sandwich"},
                       {"cluster", h + 1},
                       {"lower", s.lower},
                       {"value", s.value},
                       {"upper", s.upper},
                       {"ok", s.ok}});
    violated = violated || !s.ok;
  }
  doc["residual_identity"] = id_rows;
  doc["coupling_sandwich"] = sw_rows;
  const auto diff = laplacian_diff_bound_check(base, pert, cut);
  doc["laplacian_diff_norm"] = diff.op_norm;
  doc["laplacian_diff_bound"] = diff.bound;
  doc["laplacian_diff_ok"] = diff.ok;
  violated = violated || !diff.ok;

  json rows = json::array();
  try {
    const auto kp = nullspace_bound_known_perturbed(base, pert, cut, lt);
    doc["lhs_dsp"] = kp.lhs_dsp;
    doc["lambda_t_q1"] = kp.eigen_gap;
    doc["mean_coupling"] = kp.mean_coupling;
    doc["max_med"] = kp.max_med;
    for (const auto& b : kp.bounds) {
      rows.push_back(bound_row(b));
      violated = violated || !BoundReport::within(kp.lhs_dsp, b.value);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ZeroGap) throw;
    rows.push_back(bound_row(make_entry("known_perturbed", kInf, false, "ZeroGap")));
  }
  try {
    const auto kb = nullspace_bound_known_base(base, pert, cut, l, lt);
    doc["lambda_q1"] = kb.eigen_gap;
    for (const auto& b : kb.bounds) {
      rows.push_back(bound_row(b));
      violated = violated || !BoundReport::within(kb.lhs_dsp, b.value);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::MedConditionViolated) throw;
    doc["med_margin"] = e.value();
    rows.push_back(bound_row(make_entry("known_base_fine", kInf, false, "MedConditionViolated")));
    rows.push_back(bound_row(make_entry("known_base_coarse", kInf, false, "MedConditionViolated")));
  }
  doc["bounds"] = rows;
  emit(g, doc);
  return violated ? kViolation : kOk;
}

int run_graph_synth(const Globals& g, const ExperimentConfig& cfg,
                    const std::string& out_dir) {
  const auto [base, cut] = synth_clustered_graph(cfg);
  const auto pert = add_intercluster_edges(base, cut, cfg);
  fs::create_directories(out_dir);
  io::write_file(fs::path(out_dir) / "graph.txt", io::format_graph(base));
  io::write_file(fs::path(out_dir) / "perturbed.txt", io::format_graph(pert));
  io::write_file(fs::path(out_dir) / "cut.txt", io::format_cut(cut));
  json doc;
  doc["n"] = cfg.n_vertices;
  doc["q"] = cfg.q;
  doc["seed"] = cfg.seed;
  doc["base_edges"] = base.edges().size();
  doc["perturbed_edges"] = pert.edges().size();
  doc["out"] = out_dir;
  emit(g, doc);
  return kOk;
}

int run_best_cut(const Globals& g, const std::string& graph_path, int q,
                 bool exact, std::uint64_t seed) {
  const auto graph = io::read_graph(graph_path);
  const auto best = best_q_cut(graph, q, exact ? CutMode::Exact : CutMode::Heuristic,
                               kDefaultCutLimit, seed);
  json doc;
  doc["q"] = q;
  doc["total_coupling"] = best.total_coupling;
  doc["method"] = best.heuristic ? "heuristic" : "exact";
  doc["labels"] = best.cut.labels();
  emit(g, doc);
  return kOk;
}

int run_reproduce(const Globals& g, const ExperimentConfig& cfg) {
  const auto r = reproduce_clustered_experiment(cfg);
  emit_csv(g, "spectrum_base.csv", io::spectrum_csv(r.base_spectrum));
  emit_csv(g, "spectrum_perturbed.csv", io::spectrum_csv(r.perturbed_spectrum));
  emit_csv(g, "clusters.csv", io::cluster_csv(r.clusters));
  json doc;
  doc["n"] = cfg.n_vertices;
  doc["q"] = cfg.q;
  doc["seed"] = cfg.seed;
  doc["min_cluster_size"] = cfg.min_cluster_size;
  doc["intra_edge_prob"] = cfg.intra_edge_prob;
  doc["inter_edge_count"] = cfg.inter_edge_count;
  doc["base_edges"] = r.base_edges;
  doc["perturbed_edges"] = r.perturbed_edges;
  doc["lambda_q1"] = r.lambda_q1;
  doc["lambda_t_q1"] = r.lambda_t_q1;
  doc["mean_coupling"] = r.mean_coupling;
  doc["max_med"] = r.max_med;
  doc["med_condition"] = r.med_condition;
  doc["med_margin"] = r.med_margin;
  doc["lhs_dsp"] = r.lhs_dsp;
  doc["known_perturbed"] = number(r.known_perturbed);
  doc["known_base_fine"] = number(r.known_base_fine);
  doc["known_base_coarse"] = number(r.known_base_coarse);
  if (!r.med_condition) doc["known_base_status"] = "MedConditionViolated";
  doc["laplacian_diff_norm"] = r.laplacian_diff_norm;
  doc["laplacian_diff_bound"] = r.laplacian_diff_bound;
  doc["residual_identity_max_dev"] = r.residual_identity_max_dev;
  doc["aligned_span_dsp"] = r.aligned_span_dsp;
  doc["aligned_residual"] = r.aligned_residual;
  doc["unaligned_residual"] = r.unaligned_residual;
  json ref;
  ref["lhs_dsp"] = ReferenceValues::lhs_dsp;
  ref["known_perturbed"] = ReferenceValues::known_perturbed;
  ref["known_base_fine"] = ReferenceValues::known_base_fine;
  ref["lambda_t_q1"] = ReferenceValues::lambda_t_q1;
  ref["mean_coupling"] = ReferenceValues::mean_coupling;
  ref["max_med"] = ReferenceValues::max_med;
  doc["reference"] = ref;
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"check", c.name},
                      {"lhs", c.lhs},
                      {"rhs", c.rhs},
                      {"result", c.pass ? "pass" : "FAIL"}});
  doc["checks"] = checks;
  emit(g, doc);
  return r.all_pass() ? kOk : kViolation;
}

int run_audit(const Globals& g, int count, int n_max, std::uint64_t seed) {
  const auto s = audit_random_matrices(count, n_max, seed);
  json doc;
  doc["seed"] = s.seed;
  doc["instances"] = s.instances;
  doc["hermitian"] = s.hermitian;
  doc["normal"] = s.normal;
  doc["identity_checks"] = s.identity_checks;
  doc["identity_failures"] = s.identity_failures;
  doc["bounds_evaluated"] = s.bounds_evaluated;
  doc["condition_ok"] = s.condition_ok;
  doc["gap_instances"] = s.gap_instances;
  doc["violations"] = s.violations;
  doc["worst_ratio"] = s.worst_ratio;
  doc["worst_bound"] = s.worst_bound;
  emit(g, doc);
  for (const auto& v : s.violation_log) std::cerr << "violation: " << v << '\n';
  return s.violations == 0 && s.identity_failures == 0 ? kOk : kViolation;
}

void add_config_options(CLI::App* cmd, ExperimentConfig& cfg) {
  cmd->add_option("--n", cfg.n_vertices, "vertex count")->capture_default_str();
  cmd->add_option("--q", cfg.q, "cluster count")->capture_default_str();
  cmd->add_option("--intra-p", cfg.intra_edge_prob,
                  "intra-cluster edge probability")
      ->capture_default_str();
  cmd->add_option("--inter-edges", cfg.inter_edge_count,
                  "number of inter-cluster edges added to form the perturbed graph")
      ->capture_default_str();
  cmd->add_option("--min-cluster", cfg.min_cluster_size,
                  "vertices every cluster starts with; the rest are assigned "
                  "to uniformly drawn clusters")
      ->capture_default_str();
  cmd->add_option("--weight", cfg.edge_weight, "weight of every edge")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "64-bit seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant-subspace perturbation bounds and graph null-space experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json, "machine-readable JSON output");
  app.add_option("--tol", g.tol, "normality tolerance relative to max(1, ||M||_F^2)")
      ->capture_default_str();
  app.add_option("--emit-csv", g.emit_csv, "directory for CSV spectra and cluster tables");

  std::string a_path, b_path;
  auto* dsp = app.add_subcommand("dsp", "distance between two subspaces given as n x q frames");
  dsp->add_option("--a", a_path, "matrix file")->required();
  dsp->add_option("--b", b_path, "matrix file")->required();

  std::string p_path, q_path, r_path;
  auto* partition = app.add_subcommand("partition", "separation-preserving split of R by nearest of P, Q");
  partition->add_option("--p", p_path, "points file")->required();
  partition->add_option("--q", q_path, "points file")->required();
  partition->add_option("--r", r_path, "points file")->required();

  std::string spectrum_path;
  auto* spectrum = app.add_subcommand("spectrum", "sorted eigenvalues of a normal matrix");
  spectrum->add_option("--matrix", spectrum_path, "matrix file")->required();

  BoundsArgs bargs;
  auto* bounds = app.add_subcommand("bounds", "evaluate subspace perturbation bounds");
  bounds->add_option("--base", bargs.base, "unperturbed matrix")->required();
  bounds->add_option("--perturbed", bargs.perturbed, "perturbed matrix")->required();
  bounds->add_option("--set-a", bargs.set_a, "1-based eigen-indices, comma separated")->required();
  bounds->add_option("--set-a-tilde", bargs.set_a_tilde,
                     "1-based perturbed eigen-indices (default: nearest-group split, "
                     "else the exact closest invariant subspace)");
  bounds->add_option("--mode", bargs.mode)
      ->check(CLI::IsMember({"full", "simplified", "dk", "tilde-free", "all"}))
      ->capture_default_str();
  bounds->add_option("--kappa", bargs.kappa)
      ->check(CLI::IsMember({"zero", "tightest"}))
      ->capture_default_str();

  std::string s_pert, s_target;
  int s_q = 1;
  bool s_exact = false;
  auto* search = app.add_subcommand("search", "closest invariant subspace spanned by q eigenvectors");
  search->add_option("--perturbed", s_pert, "matrix file")->required();
  search->add_option("--target", s_target, "n x q frame")->required();
  search->add_option("--q", s_q)->required();
  search->add_flag("--exact", s_exact, "enumerate every q-subset");

  auto* graph = app.add_subcommand("graph", "graph Laplacian tools");
  graph->require_subcommand(1);
  graph->fallthrough();
  std::string ga_graph, ga_pert, ga_cut;
  auto* gaudit = graph->add_subcommand("audit", "identities and null-space bounds for a cut");
  gaudit->add_option("--graph", ga_graph, "base graph (intra-cluster edges)")->required();
  gaudit->add_option("--perturbed", ga_pert, "perturbed graph")->required();
  gaudit->add_option("--cut", ga_cut, "cut file")->required();

  ExperimentConfig synth_cfg;
  std::string synth_out;
  auto* gsynth = graph->add_subcommand("synth", "write a synthetic clustered graph, its perturbation and cut");
  add_config_options(gsynth, synth_cfg);
  gsynth->add_option("--out", synth_out, "output directory")->required();

  std::string bc_graph;
  int bc_q = 2;
  bool bc_exact = false;
  std::uint64_t bc_seed = 0;
  auto* gbest = graph->add_subcommand("best-cut", "q-cut with least total coupling");
  gbest->add_option("--graph", bc_graph)->required();
  gbest->add_option("--q", bc_q)->required();
  gbest->add_flag("--exact", bc_exact, "enumerate every q-partition");
  gbest->add_option("--seed", bc_seed, "seed for the k-means heuristic")->capture_default_str();

  ExperimentConfig repro_cfg;
  auto* reproduce = app.add_subcommand("reproduce", "333-vertex clustered graph experiment");
  add_config_options(reproduce, repro_cfg);

  int au_count = 200, au_nmax = 10;
  std::uint64_t au_seed = 1;
  auto* audit = app.add_subcommand("audit", "random-matrix soundness campaign");
  audit->add_option("--count", au_count)->capture_default_str();
  audit->add_option("--n-max", au_nmax)->capture_default_str();
  audit->add_option("--seed", au_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kCondition;
  }

  try {
    if (*dsp) return run_dsp(g, a_path, b_path);
    if (*partition) return run_partition(g, p_path, q_path, r_path);
    if (*spectrum) return run_spectrum(g, spectrum_path);
    if (*bounds) return run_bounds(g, bargs);
    if (*search) return run_search(g, s_pert, s_target, s_q, s_exact);
    if (*gaudit) return run_graph_audit(g, ga_graph, ga_pert, ga_cut);
    if (*gsynth) return run_graph_synth(g, synth_cfg, synth_out);
    if (*gbest) return run_best_cut(g, bc_graph, bc_q, bc_exact, bc_seed);
    if (*reproduce) return run_reproduce(g, repro_cfg);
    if (*audit) return run_audit(g, au_count, au_nmax, au_seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_for(e);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}
