#include "conelab/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "conelab/cohomology.hpp"
#include "conelab/cone_constructions.hpp"
#include "conelab/holonomy.hpp"
#include "conelab/linalg.hpp"
#include "conelab/null_plane.hpp"

#ifndef CONELAB_VERSION
#define CONELAB_VERSION "0.0.0"
#endif

namespace conelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Task {
  std::string id;  // prefix used when the task itself fails
  std::function<void(std::vector<CheckResult>&)> fn;
};

void run_tasks(const std::vector<Task>& tasks, std::vector<CheckResult>& out) {
  std::atomic<std::size_t> next{0};
  std::mutex sink;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      std::vector<CheckResult> local;
      try {
        tasks[i].fn(local);
      } catch (const std::exception& e) {
        local.push_back(CheckResult::bound(tasks[i].id + ".error",
                                           std::string("raised: ") + e.what(),
                                           kInf, 0));
      }
      std::lock_guard<std::mutex> lock(sink);
      out.insert(out.end(), local.begin(), local.end());
    }
  };
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(tasks.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 0; k + 1 < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

Eigen::VectorXd pt(std::initializer_list<double> xs) {
  Eigen::VectorXd p(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) p(i++) = x;
  return p;
}

constexpr double kTheta = 1.0471975511965976;  // pi / 3

/// Raises the derivative order until the span reports convergence.
EndoSpan converged_span(const MetricChart& chart, const Eigen::VectorXd& p,
                        int cap, double tol = 1e-8) {
  EndoSpan span;
  for (int k = 1; k <= cap; ++k) {
    span = ambrose_singer_span(chart, p, k, tol);
    if (span.converged) break;
  }
  return span;
}

NullFrame doubled_frame(const MetricChart& chart, const Eigen::VectorXd& p) {
  std::vector<Jet> jets = chart.components(p, 0);
  Eigen::MatrixXd g(chart.dim, chart.dim);
  for (int i = 0; i < chart.dim; ++i)
    for (int j = 0; j < chart.dim; ++j) g(i, j) = jets[i * chart.dim + j].value();
  return frame_from_null_pair(QuadraticSpace::from_metric(g), 1, 0, 1e-8);
}

// ---- cone-identities ----------------------------------------------------

std::vector<Task> cone_identity_tasks(const Settings& s) {
  std::vector<Task> tasks;
  struct Base {
    const char* tag;
    std::function<MetricChart()> make;
  };
  const Base bases[] = {
      {"flat0_2", [] { return flat_chart(0, 2); }},
      {"sphere2", [] { return sphere_chart(2); }},
      {"hyperbolic2", [] { return hyperbolic_chart(2); }},
      {"cahen_wallach",
       [] { return cahen_wallach_chart(Eigen::Matrix2d::Identity()); }},
  };
  for (const Base& b : bases) {
    std::string id = std::string("cone-identities.") + b.tag;
    tasks.push_back({id, [b, id, s](std::vector<CheckResult>& out) {
                       MetricChart base = b.make();
                       ConeIdentityResiduals worst;
                       for (const auto& p : sample_grid(base, s.grid, s.seed)) {
                         ConeIdentityResiduals r = cone_identity_residuals(base, p);
                         worst.connection = std::max(worst.connection, r.connection);
                         worst.curvature = std::max(worst.curvature, r.curvature);
                         worst.ricci = std::max(worst.ricci, r.ricci);
                       }
                       std::string lbl = "cone over " + base.label;
                       out.push_back(CheckResult::bound(
                           id + ".connection", lbl + ": connection block form",
                           worst.connection, 1e-8));
                       out.push_back(CheckResult::bound(
                           id + ".curvature", lbl + ": curvature block form",
                           worst.curvature, 1e-8));
                       out.push_back(CheckResult::bound(
                           id + ".ricci", lbl + ": Ricci block form",
                           worst.ricci, 1e-8));
                     }});
  }
  tasks.push_back(
      {"cone-identities.hyperbolic2_cone.flatness",
       [s](std::vector<CheckResult>& out) {
         MetricChart c = cone(hyperbolic_chart(2));
         double worst = 0;
         for (const auto& p : sample_grid(c, s.grid, s.seed))
           worst = std::max(worst, constant_curvature_residual(c, p, 0.0));
         out.push_back(CheckResult::bound(
             "cone-identities.hyperbolic2_cone.flatness",
             "cone over hyperbolic(2) is flat", worst, 1e-9));
       }});
  tasks.push_back(
      {"cone-identities.sphere2_cone.span_dim",
       [](std::vector<CheckResult>& out) {
         EndoSpan span =
             converged_span(cone(sphere_chart(2)), pt({1.0, kTheta, 0.0}), 2);
         out.push_back(CheckResult::equals(
             "cone-identities.sphere2_cone.span_dim",
             "cone over sphere(2): curvature span dimension", span.dim(), 3));
       }});
  return tasks;
}

// ---- doubled-derivatives ------------------------------------------------

std::vector<Task> doubled_derivative_tasks(const Settings& s) {
  std::vector<Task> tasks;
  struct Case {
    const char* tag;
    double u;
  };
  for (Case c : {Case{"u05", 0.5}, Case{"u10", 1.0}, Case{"u20", 2.0}}) {
    std::string id = std::string("doubled-derivatives.sphere2.") + c.tag;
    int jo = std::max(7, s.jet_order);
    tasks.push_back({id, [c, id, jo](std::vector<CheckResult>& out) {
                       double r = doubled_derivative_residuals(
                           sphere_chart(2), pt({c.u, 0.0, kTheta, 0.0}), 2, 2,
                           jo);
                       out.push_back(CheckResult::bound(
                           id,
                           "doubled sphere(2): mixed curvature derivatives "
                           "against base closed forms at u = " +
                               format_value(c.u),
                           r, 1e-8));
                     }});
  }
  return tasks;
}

// ---- psi-isometry -------------------------------------------------------

std::vector<Task> psi_isometry_tasks(const Settings& s) {
  std::vector<Task> tasks;
  struct Base {
    const char* tag;
    std::function<MetricChart()> make;
  };
  const Base bases[] = {
      {"flat0_1", [] { return flat_chart(0, 1); }},
      {"sphere2", [] { return sphere_chart(2); }},
  };
  for (const Base& b : bases) {
    std::string id = std::string("psi-isometry.") + b.tag;
    tasks.push_back({id, [b, id, s](std::vector<CheckResult>& out) {
                       MetricChart base = b.make();
                       MetricChart source = cone(exponential_extension(base));
                       double worst = 0;
                       for (const auto& p : sample_grid(source, s.grid, s.seed))
                         worst = std::max(worst,
                                          doubling_isometry_residual(base, p));
                       out.push_back(CheckResult::bound(
                           id,
                           "cone over exponential extension of " + base.label +
                               " maps isometrically onto the doubled chart",
                           worst, 1e-10));
                     }});
  }
  tasks.push_back(
      {"psi-isometry.stretch_detector",
       [s](std::vector<CheckResult>& out) {
         MetricChart base = flat_chart(0, 1);
         MetricChart source = cone(exponential_extension(base));
         Eigen::VectorXd p = sample_grid(source, 1, s.seed).front();
         out.push_back(CheckResult::at_least(
             "psi-isometry.stretch_detector",
             "a stretched coordinate map is flagged as non-isometric",
             doubling_isometry_residual(base, p, 1.1), 1e-3));
       }});
  return tasks;
}

// ---- cohomology ---------------------------------------------------------

Eigen::MatrixXd embed_block(const Eigen::MatrixXd& m, int offset, int n) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  out.block(offset, offset, m.rows(), m.cols()) = m;
  return out;
}

struct CompactEntry {
  std::string tag;
  int n = 0;
  MatrixAlgebra alg;     // the full linear part inside so(n)
  MatrixAlgebra centre;  // its centre
  MatrixAlgebra rest;    // a complement of the centre
};

std::vector<CompactEntry> compact_battery() {
  std::vector<CompactEntry> out;
  {
    CompactEntry e{"so2", 2, {}, {}, {}};
    e.alg = MatrixAlgebra::make(so_basis(0, 2));
    e.centre = e.alg;
    e.rest = MatrixAlgebra::trivial(2);
    out.push_back(std::move(e));
  }
  {
    CompactEntry e{"so3", 3, {}, {}, {}};
    e.alg = MatrixAlgebra::make(so_basis(0, 3));
    e.centre = MatrixAlgebra::trivial(3);
    e.rest = e.alg;
    out.push_back(std::move(e));
  }
  {
    CompactEntry e{"so2_so3", 5, {}, {}, {}};
    std::vector<Eigen::MatrixXd> centre_basis;
    for (const auto& m : so_basis(0, 2)) centre_basis.push_back(embed_block(m, 0, 5));
    std::vector<Eigen::MatrixXd> rest_basis;
    for (const auto& m : so_basis(0, 3)) rest_basis.push_back(embed_block(m, 2, 5));
    std::vector<Eigen::MatrixXd> all = centre_basis;
    all.insert(all.end(), rest_basis.begin(), rest_basis.end());
    e.alg = MatrixAlgebra::make(all);
    e.centre = MatrixAlgebra::make(centre_basis);
    e.rest = MatrixAlgebra::make(rest_basis);
    out.push_back(std::move(e));
  }
  return out;
}

/// The scaling-twisted family degenerates to the plain one when the
/// centre is trivial; instantiate accordingly.
MatrixAlgebra twisted_instance(const CompactEntry& e) {
  StabiliserFamilyParams params;
  params.centre = e.centre;
  params.rest = e.rest;
  if (e.centre.dim() == 0)
    return stabiliser_family(StabiliserFamily::no_scaling, e.n, params);
  params.scaling_twist = Eigen::VectorXd::Ones(e.centre.dim());
  return stabiliser_family(StabiliserFamily::twisted_scaling, e.n, params);
}

std::vector<Task> cohomology_tasks(const Settings&) {
  std::vector<Task> tasks;
  tasks.push_back({"cohomology.whitehead", [](std::vector<CheckResult>& out) {
                     MatrixAlgebra so3 = MatrixAlgebra::make(so_basis(0, 3));
                     MatrixAlgebra so4 = MatrixAlgebra::make(so_basis(0, 4));
                     out.push_back(CheckResult::equals(
                         "cohomology.whitehead.so3_adjoint",
                         "so(3) adjoint module has trivial first cohomology",
                         cohomology(LieModule::adjoint(structure_constants(so3)))
                             .h1_dim,
                         0));
                     out.push_back(CheckResult::equals(
                         "cohomology.whitehead.so3_standard",
                         "so(3) on R^3 has trivial first cohomology",
                         cohomology(LieModule::matrix(so3)).h1_dim, 0));
                     out.push_back(CheckResult::equals(
                         "cohomology.whitehead.so4_standard",
                         "so(4) on R^4 has trivial first cohomology",
                         cohomology(LieModule::matrix(so4)).h1_dim, 0));
                   }});
  for (const CompactEntry& e : compact_battery()) {
    tasks.push_back(
        {"cohomology.family_scaling." + e.tag,
         [e](std::vector<CheckResult>& out) {
           StabiliserFamilyParams params;
           params.centre = e.centre;
           params.rest = e.rest;
           MatrixAlgebra alg =
               stabiliser_family(StabiliserFamily::scaling, e.n, params);
           out.push_back(CheckResult::equals(
               "cohomology.family_scaling." + e.tag + ".h1",
               "scaling stabiliser family over " + e.tag +
                   ": first cohomology vanishes",
               cohomology(LieModule::matrix(alg)).h1_dim, 0));
           SubspaceBasis sub = SubspaceBasis::make(
               Eigen::MatrixXd::Identity(e.n + 2, e.n + 2).leftCols(e.n + 1));
           out.push_back(CheckResult::equals(
               "cohomology.quotient_scaling." + e.tag + ".h1",
               "scaling family over " + e.tag +
                   ": quotient by the degenerate hyperplane has trivial "
                   "first cohomology",
               cohomology(quotient_module(LieModule::matrix(alg), sub)).h1_dim,
               0));
         }});
    tasks.push_back(
        {"cohomology.family_twisted." + e.tag,
         [e](std::vector<CheckResult>& out) {
           MatrixAlgebra alg = twisted_instance(e);
           out.push_back(CheckResult::equals(
               "cohomology.family_twisted." + e.tag + ".h1",
               "scaling-twisted stabiliser family over " + e.tag +
                   ": first cohomology vanishes",
               cohomology(LieModule::matrix(alg)).h1_dim, 0));
           SubspaceBasis sub = SubspaceBasis::make(
               Eigen::MatrixXd::Identity(e.n + 2, e.n + 2).leftCols(e.n + 1));
           out.push_back(CheckResult::equals(
               "cohomology.quotient_twisted." + e.tag + ".h1",
               "scaling-twisted family over " + e.tag +
                   ": quotient by the degenerate hyperplane has trivial "
                   "first cohomology",
               cohomology(quotient_module(LieModule::matrix(alg), sub)).h1_dim,
               0));
         }});
    tasks.push_back(
        {"cohomology.family_plain." + e.tag,
         [e](std::vector<CheckResult>& out) {
           StabiliserFamilyParams params;
           params.centre = e.centre;
           params.rest = e.rest;
           MatrixAlgebra alg =
               stabiliser_family(StabiliserFamily::no_scaling, e.n, params);
           int h1 = cohomology(LieModule::matrix(alg)).h1_dim;
           int predicted = predicted_h1_dimension(e.alg, e.n);
           out.push_back(CheckResult::equals(
               "cohomology.family_plain." + e.tag + ".h1",
               "line-annihilating family over " + e.tag +
                   ": first cohomology matches the closed-form count",
               h1, predicted));
         }});
  }
  return tasks;
}

// ---- holonomy-catalog ---------------------------------------------------

std::vector<Task> holonomy_tasks(const Settings&) {
  std::vector<Task> tasks;
  tasks.push_back(
      {"holonomy-catalog.cone_sphere2", [](std::vector<CheckResult>& out) {
         EndoSpan span =
             converged_span(chart_by_id("cone:sphere2"), pt({1.0, kTheta, 0.0}), 2);
         out.push_back(CheckResult::equals(
             "holonomy-catalog.cone_sphere2.dim",
             "cone over sphere(2): holonomy span dimension", span.dim(), 3));
       }});
  tasks.push_back(
      {"holonomy-catalog.cone_hyperbolic2", [](std::vector<CheckResult>& out) {
         EndoSpan span = converged_span(chart_by_id("cone:hyperbolic2"),
                                        pt({1.0, 0.0, 1.0}), 2);
         out.push_back(CheckResult::equals(
             "holonomy-catalog.cone_hyperbolic2.dim",
             "cone over hyperbolic(2): holonomy span dimension", span.dim(), 0));
       }});
  tasks.push_back(
      {"holonomy-catalog.doubled_cahen_wallach",
       [](std::vector<CheckResult>& out) {
         MetricChart ch = chart_by_id("doubled:cahen_wallach");
         Eigen::VectorXd p = pt({1.0, 0.0, 0.0, 0.0, 0.0, 0.0});
         EndoSpan span = converged_span(ch, p, 3);
         out.push_back(CheckResult::equals(
             "holonomy-catalog.doubled_cahen_wallach.dim",
             "doubled Cahen-Wallach: holonomy span dimension", span.dim(), 5));
         StabilizerAnalysis st = stabilizer_analysis(span, doubled_frame(ch, p));
         out.push_back(CheckResult::equals(
             "holonomy-catalog.doubled_cahen_wallach.translations",
             "doubled Cahen-Wallach: translational ideal dimension",
             st.translations.vectors.cols(), 3));
       }});
  tasks.push_back(
      {"holonomy-catalog.doubled_sphere2", [](std::vector<CheckResult>& out) {
         EndoSpan span = converged_span(chart_by_id("doubled:sphere2"),
                                        pt({1.0, 0.0, kTheta, 0.0}), 2);
         out.push_back(CheckResult::equals(
             "holonomy-catalog.doubled_sphere2.dim",
             "doubled sphere(2): holonomy span dimension", span.dim(), 3));
       }});
  tasks.push_back(
      {"holonomy-catalog.doubled_pp_wave_sq2",
       [](std::vector<CheckResult>& out) {
         MetricChart ch = chart_by_id("doubled:pp_wave_sq2");
         Eigen::VectorXd p = pt({1.0, 0.0, 0.0, 0.0, 0.0, 0.0});
         EndoSpan span = converged_span(ch, p, 3);
         NullFrame frame = doubled_frame(ch, p);
         StabilizerAnalysis st = stabilizer_analysis(span, frame);
         out.push_back(CheckResult::equals(
             "holonomy-catalog.doubled_pp_wave_sq2.translations",
             "doubled squared-profile wave: translational ideal dimension",
             st.translations.vectors.cols(), 3));
         Eigen::MatrixXd ambient = frame.v0_basis * st.translations.vectors;
         Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(6, 3);
         expected(2, 0) = expected(3, 1) = expected(4, 2) = 1;  // x, y1, y2
         out.push_back(CheckResult::bound(
             "holonomy-catalog.doubled_pp_wave_sq2.translation_space",
             "doubled squared-profile wave: translations fill the orthogonal "
             "complement of the parallel base direction",
             principal_distance(ambient, expected, 1e-8), 1e-8));
       }});
  tasks.push_back(
      {"holonomy-catalog.doubled_plane_wave_exp",
       [](std::vector<CheckResult>& out) {
         MetricChart ch = chart_by_id("doubled:plane_wave_exp");
         Eigen::VectorXd p = pt({1.0, 0.0, 0.0, 0.0, 0.0});
         EndoSpan span = converged_span(ch, p, 3);
         out.push_back(CheckResult::equals(
             "holonomy-catalog.doubled_plane_wave_exp.dim",
             "doubled exponential plane wave: holonomy span dimension",
             span.dim(), 2));
         std::vector<Eigen::MatrixXd> ref = doubled_plane_wave_reference_span();
         SpanComparison cmp = compare_endo_sets(span.basis, ref, 1e-6);
         out.push_back(CheckResult::bound(
             "holonomy-catalog.doubled_plane_wave_exp.reference_distance",
             "doubled exponential plane wave: distance to the reference span",
             cmp.distance, 1e-8));
         out.push_back(CheckResult::equals(
             "holonomy-catalog.doubled_plane_wave_exp.reference_contained",
             "doubled exponential plane wave: reference span sits inside the "
             "computed span",
             cmp.b_in_a ? 1 : 0, 1));
       }});
  struct Projection {
    const char* tag;
    const char* base_id;
    Eigen::VectorXd base_point;
    int base_cap;
  };
  const Projection projections[] = {
      {"sphere2", "sphere2", pt({kTheta, 0.0}), 2},
      {"cahen_wallach", "cahen_wallach", pt({0.0, 0.0, 0.0, 0.0}), 2},
      {"pp_wave_sq2", "pp_wave_sq2", pt({0.0, 0.0, 0.0, 0.0}), 2},
      {"plane_wave_exp", "plane_wave_exp", pt({0.0, 0.0, 0.0}), 3},
  };
  for (const Projection& pr : projections) {
    std::string id = std::string("holonomy-catalog.projection.") + pr.tag;
    tasks.push_back({id, [pr, id](std::vector<CheckResult>& out) {
                       MetricChart base = base_chart_by_id(pr.base_id);
                       MetricChart doubled = double_warped(base);
                       Eigen::VectorXd dp(base.dim + 2);
                       dp(0) = 1.0;
                       dp(1) = 0.0;
                       dp.tail(base.dim) = pr.base_point;
                       EndoSpan dspan = converged_span(doubled, dp, 3);
                       EndoSpan bspan =
                           converged_span(base, pr.base_point, pr.base_cap);
                       std::vector<Eigen::MatrixXd> so_parts;
                       for (const auto& m : dspan.basis) {
                         SplitEndo se = split_doubled_endo(m);
                         if (se.so_part.cwiseAbs().maxCoeff() > 1e-10)
                           so_parts.push_back(se.so_part);
                       }
                       SpanComparison cmp =
                           compare_endo_sets(so_parts, bspan.basis, 1e-6);
                       out.push_back(CheckResult::bound(
                           id,
                           "rotational projection of the doubled holonomy "
                           "span matches the base span over " +
                               base.label,
                           cmp.distance, 1e-6));
                     }});
  }
  tasks.push_back(
      {"holonomy-catalog.loop_ratio", [](std::vector<CheckResult>& out) {
         MetricChart s2 = sphere_chart(2);
         auto battery =
             loop_curvature_battery(s2, pt({kTheta, 0.0}), {0.2, 0.1}, 1024);
         double r02 = 0, r01 = 0;
         for (const auto& c : battery) {
           if (c.side == 0.2) r02 = std::max(r02, c.residual);
           if (c.side == 0.1) r01 = std::max(r01, c.residual);
         }
         double ratio = r01 > 0 ? r02 / r01 : kInf;
         out.push_back(CheckResult::at_least(
             "holonomy-catalog.loop_ratio.lower",
             "sphere(2) parallelogram defect shrinks no slower than first "
             "order when the side halves",
             ratio, 1.5));
         out.push_back(CheckResult::bound(
             "holonomy-catalog.loop_ratio.upper",
             "sphere(2) parallelogram defect shrinks no faster than the "
             "cubic envelope when the side halves",
             ratio, 4.5));
       }});
  struct LoopCase {
    const char* tag;
    const char* chart_id;
    Eigen::VectorXd point;
    int cap;
    int steps;
  };
  const LoopCase loop_cases[] = {
      {"sphere2", "sphere2", pt({kTheta, 0.0}), 2, 1024},
      {"cone_sphere2", "cone:sphere2", pt({1.0, kTheta, 0.0}), 2, 1024},
      {"doubled_plane_wave_exp", "doubled:plane_wave_exp",
       pt({1.0, 0.0, 0.0, 0.0, 0.0}), 3, 512},
  };
  for (const LoopCase& lc : loop_cases) {
    std::string id = std::string("holonomy-catalog.loop_vs_jets.") + lc.tag;
    tasks.push_back({id, [lc, id](std::vector<CheckResult>& out) {
                       MetricChart ch = chart_by_id(lc.chart_id);
                       EndoSpan jets = converged_span(ch, lc.point, lc.cap);
                       EndoSpan loops =
                           loop_generated_span(ch, lc.point, 0.1, 0.15, lc.steps);
                       SpanComparison cmp =
                           compare_endo_sets(loops.basis, jets.basis, 1e-6);
                       out.push_back(CheckResult::bound(
                           id,
                           "transport-loop span agrees with the curvature "
                           "span on " +
                               ch.label,
                           cmp.distance, 1e-5));
                     }});
  }
  return tasks;
}

// ---- null-plane ---------------------------------------------------------

std::vector<Task> null_plane_tasks(const Settings& s) {
  std::vector<Task> tasks;
  for (const char* tag : {"basic", "coupled", "ufamily"}) {
    std::string id = std::string("null-plane.") + tag;
    tasks.push_back({id, [tag, id, s](std::vector<CheckResult>& out) {
                       NullPlaneData data = null_plane_data_from_json(
                           builtin_null_plane_config(tag));
                       EtaField eta = solve_eta(data);
                       out.push_back(CheckResult::bound(
                           id + ".system",
                           std::string(tag) +
                               ": first-order system for the 1-form holds",
                           eta_system_residual(data, eta, s.grid), 1e-9));
                       MetricChart chart = build_metric(data, eta);
                       NormalFormFrame frame = normal_form_frame(data, eta);
                       double fund = 0, geo = 0;
                       for (const auto& p : sample_grid(chart, 8, s.seed)) {
                         fund = std::max(fund,
                                         fundamental_residuals(chart, frame.V,
                                                               frame.Z,
                                                               frame.alpha,
                                                               frame.beta, p)
                                             .max());
                         geo = std::max(geo,
                                        geodesic_residual(chart, frame.V, p));
                       }
                       out.push_back(CheckResult::bound(
                           id + ".fundamental",
                           std::string(tag) +
                               ": structure equations of the frame pair hold",
                           fund, 1e-8));
                       out.push_back(CheckResult::bound(
                           id + ".geodesic",
                           std::string(tag) + ": the null field is geodesic",
                           geo, 1e-8));
                       out.push_back(CheckResult::bound(
                           id + ".cone",
                           std::string(tag) +
                               ": cone carries the parallel totally null plane",
                           cone_null_plane_check(data, eta, 16).max(), 1e-8));
                     }});
  }
  tasks.push_back(
      {"null-plane.detector_beta", [](std::vector<CheckResult>& out) {
         NullPlaneData data =
             null_plane_data_from_json(builtin_null_plane_config("basic"));
         EtaField eta = solve_eta(data);
         MetricChart chart = build_metric(data, eta);
         NormalFormFrame frame = normal_form_frame(data, eta);
         NormalFormFrame bad = corrupt_beta(frame, data.m0_dim + 1, 0.1);
         Eigen::VectorXd p = pt({0.1, 0.2, 0.3, 1.0});
         out.push_back(CheckResult::at_least(
             "null-plane.detector_beta",
             "a corrupted second covector trips the structure equations",
             fundamental_residuals(chart, bad.V, bad.Z, bad.alpha, bad.beta, p)
                 .d_zflat,
             1e-3));
       }});
  tasks.push_back(
      {"null-plane.detector_eta", [](std::vector<CheckResult>& out) {
         NullPlaneData data =
             null_plane_data_from_json(builtin_null_plane_config("basic"));
         EtaField eta = solve_eta(data);
         EtaField bad = corrupt_eta_t(eta, 0.1);
         out.push_back(CheckResult::at_least(
             "null-plane.detector_eta",
             "a corrupted 1-form trips the cone plane residual",
             cone_null_plane_check(data, bad, 8).max(), 1e-3));
       }});
  return tasks;
}

std::vector<Task> tasks_for(const std::string& name, const Settings& s) {
  if (name == "cone-identities") return cone_identity_tasks(s);
  if (name == "doubled-derivatives") return doubled_derivative_tasks(s);
  if (name == "psi-isometry") return psi_isometry_tasks(s);
  if (name == "cohomology") return cohomology_tasks(s);
  if (name == "holonomy-catalog") return holonomy_tasks(s);
  if (name == "null-plane") return null_plane_tasks(s);
  if (name == "all") {
    std::vector<Task> all;
    for (const std::string& n : suite_names()) {
      if (n == "all") continue;
      std::vector<Task> part = tasks_for(n, s);
      all.insert(all.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
    }
    return all;
  }
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"cone-identities", "doubled-derivatives", "psi-isometry",
          "holonomy-catalog", "cohomology",         "null-plane",
          "all"};
}

bool is_suite_name(const std::string& name) {
  for (const std::string& n : suite_names())
    if (n == name) return true;
  return false;
}

SuiteReport run_suite(const std::string& name, const Settings& settings) {
  std::vector<Task> tasks = tasks_for(name, settings);
  SuiteReport report;
  report.suite = name;
  report.version = CONELAB_VERSION;
  report.config = settings;
  run_tasks(tasks, report.checks);
  std::sort(report.checks.begin(), report.checks.end(),
            [](const CheckResult& a, const CheckResult& b) { return a.id < b.id; });
  return report;
}

}  // namespace conelab
