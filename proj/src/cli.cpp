#include "clausenlab/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "clausenlab/conv.hpp"
#include "clausenlab/dtwo.hpp"
#include "clausenlab/json_io.hpp"
#include "clausenlab/markov.hpp"
#include "clausenlab/spectral.hpp"
#include "clausenlab/weyl.hpp"

namespace clausenlab::cli {

namespace {

struct Globals {
  std::string out;
  std::uint64_t seed = 1;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  int max_word_len = 8;
  int trunc = 12;
  std::string det_convention = "first-col-right";
  std::string d_convention = "tddt";
  int lambda_sign = 1;
  int q_trace_sign = -1;
  bool timings = false;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Report {
public:
  Report(std::string subcommand, const Globals& g) : g_(g) {
    j_["schema_version"] = kSchemaVersion;
    j_["tool"] = "clausenlab";
    j_["version"] = kToolVersion;
    j_["subcommand"] = std::move(subcommand);
    j_["conventions"] = {{"d_convention", g.d_convention},
                         {"det_convention", g.det_convention},
                         {"lambda_sign", g.lambda_sign},
                         {"q_trace_sign", g.q_trace_sign}};
    j_["seed"] = g.seed;
    j_["input"] = Json::object();
    j_["checks"] = Json::array();
  }

  Json& input() { return j_["input"]; }

  void add(const std::string& name, const char* status, Json data, double ms) {
    Json c;
    c["name"] = name;
    c["status"] = status;
    c["data"] = std::move(data);
    if (g_.timings) c["timing_ms"] = ms;
    j_["checks"].push_back(std::move(c));
    if (std::string(status) == "fail" && first_failure_.empty()) first_failure_ = name;
  }

  /// Runs `body`, which fills `data` and returns the verdict. A MathError
  /// becomes a failing block carrying the message.
  void check(const std::string& name, const std::function<bool(Json&)>& body) {
    Json data = Json::object();
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    try {
      pass = body(data);
    } catch (const MathError& e) {
      data["error"] = e.what();
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    add(name, pass ? "pass" : "fail", std::move(data), ms);
  }

  void skip(const std::string& name, Json data) { add(name, "skip", std::move(data), 0.0); }

  int finish(std::ostream& out, std::ostream& err) {
    j_["status"] = first_failure_.empty() ? "pass" : "fail";
    const std::string text = j_.dump(2) + "\n";
    if (g_.out.empty()) {
      out << text;
    } else {
      std::ofstream f(g_.out, std::ios::binary);
      if (!f) throw UsageError("cannot write " + g_.out);
      f << text;
    }
    if (!first_failure_.empty()) {
      err << "check failed: " << first_failure_ << "\n";
      return 1;
    }
    return 0;
  }

private:
  const Globals& g_;
  Json j_;
  std::string first_failure_;
};

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::string cstr(const CycloNum& z) { return z.str(); }

Json point_json(const markov::MarkovPoint& p) {
  return Json::array({to_string(p.m1), to_string(p.m2), to_string(p.m3)});
}

template <class T>
std::vector<T> split_list(const std::string& s, const std::function<T(const std::string&)>& conv) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(conv(item));
  if (out.empty()) throw UsageError("empty list: " + s);
  return out;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw UsageError("not a number: " + s);
  return v;
}

// ---- dn -------------------------------------------------------------------

void dn_case(Report& rep, const std::string& tag, const weyl::DNMatrix& a, const Globals& g) {
  const auto det = weyl::parse_det_convention(g.det_convention);
  const auto dconv = weyl::parse_d_convention(g.d_convention);
  std::optional<weyl::WeylOp> op;
  rep.check(tag + ".left_divisible_by_D", [&](Json& d) {
    d["N"] = a.N();
    d["matrix"] = to_json(a.matrix());
    op = weyl::dn_build(a, det, dconv);
    d["operator"] = op->str();
    return true;
  });
  if (!op) return;
  rep.check(tag + ".indicial", [&](Json& d) {
    const auto ind = weyl::dn_indicial_at_zero(*op);
    d["indicial"] = ind.str("rho");
    return weyl::is_scaled_power(ind, a.N());
  });
  rep.check(tag + ".singular_locus", [&](Json& d) {
    const auto v = weyl::dn_singular_locus(*op, a);
    d["leading"] = v.leading.str("t");
    d["t_power"] = v.t_power_stripped;
    d["det_one_minus_tA"] = v.det_one_minus_tA.str("t");
    d["det_squarefree"] = v.det_squarefree;
    d["proportional"] = v.proportional;
    return v.proportional;
  });
}

// ---- markov ----------------------------------------------------------------

markov::PipelineOptions pipeline_options(const Globals& g, bool scan) {
  markov::PipelineOptions o;
  o.max_word_len = g.max_word_len;
  o.lambda_sign = g.lambda_sign;
  o.qsign = g.q_trace_sign;
  o.scan = scan;
  o.threads = g.threads;
  return o;
}

Json scan_json(const conv::ScanSummary& s) {
  Json d;
  d["words"] = s.words;
  d["identities"] = s.identities;
  d["unipotents"] = s.unipotents;
  d["unipotent_words"] = s.unipotent_words;
  d["all_traces_integral"] = s.all_traces_integral;
  d["non_integral_words"] = s.non_integral_words;
  Json h = Json::object();
  for (const auto& [k, v] : s.order_histogram) h[k] = v;
  d["projective_orders"] = h;
  return d;
}

void pipeline_checks(Report& rep, const markov::MarkovPoint& p, const markov::PipelineOptions& opt) {
  const std::string tag = "point[" + p.str() + "]";
  std::optional<markov::PipelineReport> r;
  rep.check(tag + ".reflection_triple", [&](Json& d) {
    d["point"] = point_json(p);
    r = markov::twisted_clausen_pipeline(p, opt);
    d["Q_trace"] = cstr(r->triple.Q().trace());
    return true;
  });
  if (!r) return;
  rep.check(tag + ".pullback", [&](Json& d) {
    d["commutator_trace"] = cstr(r->commutator_trace);
    d["commutator_is_Q2"] = r->commutator_is_Q2;
    d["base_traces_ok"] = r->base_traces_ok;
    return r->commutator_is_Q2 && r->base_traces_ok;
  });
  rep.check(tag + ".ranks", [&](Json& d) {
    d["base_mc_twist_sym2"] = r->ranks;
    d["mc_local_eigenvalues_ok"] = r->mc_local_eigen_ok;
    bool ok = r->ranks == std::vector<std::size_t>{2, 2, 2, 3};
    for (bool b : r->mc_local_eigen_ok) ok = ok && b;
    return ok;
  });
  rep.check(tag + ".pair_traces", [&](Json& d) {
    Json t = Json::array();
    for (const auto& c : r->traces)
      t.push_back({{"name", c.name}, {"word", c.word}, {"trace", cstr(c.trace)}, {"expected", to_string(c.expected)}});
    d["traces"] = t;
    d["squared_word_traces"] = Json::array({cstr(r->squared_word_traces[0]), cstr(r->squared_word_traces[1]),
                                            cstr(r->squared_word_traces[2])});
    return r->pair_traces_ok;
  });
  if (r->scan) {
    rep.check(tag + ".no_unipotent", [&](Json& d) {
      d = scan_json(*r->scan);
      d["max_word_len"] = opt.max_word_len;
      return r->no_unipotent;
    });
  } else {
    rep.skip(tag + ".no_unipotent", {{"reason", "word scan disabled"}});
  }
  rep.check(tag + ".invariant_form", [&](Json& d) {
    d["dimension"] = r->symmetric_forms.basis.size();
    d["ranks"] = r->symmetric_forms.ranks;
    if (!r->symmetric_forms.basis.empty()) d["form"] = to_json(r->symmetric_forms.basis[0]);
    return r->form_ok;
  });
  if (r->integral_traces) {
    rep.check(tag + ".integral_traces", [&](Json& d) {
      d["all_traces_integral"] = *r->integral_traces;
      return *r->integral_traces;
    });
  }
  rep.check(tag + ".local_profile", [&](Json& d) {
    Json a = Json::array();
    for (const auto& lp : r->profile) {
      Json e;
      e["label"] = lp.label;
      Json cp = Json::array();
      for (const auto& c : lp.charpoly.coeffs()) cp.push_back(cstr(c));
      e["charpoly"] = cp;
      e["trace_sq_over_det"] = cstr(lp.trace_sq_over_det);
      e["projective_order"] = lp.projective_order ? Json(*lp.projective_order) : Json(nullptr);
      a.push_back(e);
    }
    d["locals"] = a;
    return true;
  });
}

// ---- selftest --------------------------------------------------------------

void selftest(Report& rep, const Globals& g) {
  rep.check("field.roots_of_unity", [](Json&) {
    const CycloNum z = CycloNum::zeta(1);
    CycloNum p(1);
    for (int k = 0; k < 12; ++k) p *= z;
    return p == CycloNum(-1) && CycloNum::i() * CycloNum::i() == CycloNum(-1) && CycloNum::zeta(24) == CycloNum(1);
  });
  rep.check("field.charpoly", [](Json&) {
    const QMatrix m{{make_rational(1), make_rational(2)}, {make_rational(3), make_rational(4)}};
    return m.charpoly() == Poly<Rational>{make_rational(-2), make_rational(-5), make_rational(1)};
  });
  rep.check("series.clausen", [](Json& d) {
    const auto r = dtwo::clausen_product_check(5);
    Json v = Json::array();
    for (const auto& c : r.square) v.push_back(to_string(c));
    d["square"] = v;
    return r.identity_holds && r.square[5] == make_rational(7, 400);
  });
  rep.check("weyl.Dt_squared", [](Json& d) {
    using weyl::WeylOp;
    const WeylOp x = WeylOp::D() * WeylOp::t();
    const WeylOp sq = x * x;
    d["operator"] = sq.str();
    WeylOp want;
    want.add_term(2, 2, Rational(1));
    want.add_term(2, 1, Rational(3));
    want.add_term(2, 0, Rational(2));
    return sq == want;
  });
  rep.check("weyl.dn_N1", [](Json& d) {
    const auto a = weyl::DNMatrix::zero(1);
    const auto op = weyl::dn_build(a);
    d["operator"] = op.str();
    return weyl::is_scaled_power(weyl::dn_indicial_at_zero(op), 1);
  });
  rep.check("dtwo.recurrence", [](Json&) {
    const auto s = dtwo::d2_coefficients({Rational(1), Rational(2)}, 6);
    for (const auto& r : dtwo::d2_residual(s))
      if (!r.is_zero()) return false;
    return true;
  });
  rep.check("dtwo.bessel", [](Json&) { return dtwo::verify_bessel_degenerate(6).ok(); });
  rep.check("conv.gauss", [](Json& d) {
    const CycloNum alpha(2), beta = CycloNum::zeta(4), lambda = CycloNum::zeta(3);
    const conv::LocalSystemTuple t({CMatrix{{alpha}}, CMatrix{{beta}}});
    const auto mc = conv::middle_convolution(t, lambda);
    d["rank"] = mc.rank();
    return mc.rank() == 2;
  });
  rep.check("markov.tree", [](Json&) { return markov::markov_tree(100) == markov::markov_brute_force(100); });
  rep.check("markov.pipeline_333", [&g](Json&) {
    const auto r = markov::twisted_clausen_pipeline(markov::parse_point("3,3,3"), pipeline_options(g, false));
    return r.ok() && r.pair_traces_ok;
  });
  rep.check("markov.off_surface", [](Json& d) {
    try {
      markov::build_reflection_triple(markov::parse_point("3,3,5"));
    } catch (const MathError& e) {
      d["error"] = e.what();
      return std::string(e.what()).find("consistency identity fails") != std::string::npos;
    }
    return false;
  });
  rep.check("spectral.circle", [](Json&) { return spectral::circle_hecke_check(2, 200, 1).ok(); });
  rep.check("spectral.ap", [](Json&) { return spectral::cubic_ap(229) == 1 && spectral::cubic_ap(3) == -1; });
  rep.check("spectral.k0", [](Json&) {
    for (double x : {0.3, 1.7, 6.0})
      if (std::abs(spectral::k0_integral(x) - spectral::k0_series(x)) > 1e-12 * spectral::k0_series(x)) return false;
    return true;
  });
  rep.check("spectral.sym2", [](Json&) {
    const auto f = spectral::sym2_euler_factor(std::polar(std::sqrt(2.0), 0.7), 2);
    for (const auto& r : f.roots)
      if (std::abs(std::abs(r) - 2.0) > 1e-12) return false;
    return true;
  });
  rep.check("spectral.sonine", [](Json&) { return spectral::sonine_gegenbauer_check(1.0, 1.0).error < 1e-10; });
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Globals g;
  CLI::App app{"Exact and numerical checks for D2 operators, middle convolution and Markov local systems",
               "clausenlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  auto add_globals = [&g](CLI::App* c) {
    c->add_option("--out", g.out, "write the report here instead of stdout");
    c->add_option("--seed", g.seed, "seed for every random choice");
    c->add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
    c->add_option("--trunc", g.trunc, "truncation order for kernel expansions")->check(CLI::PositiveNumber);
    c->add_option("--det-convention", g.det_convention)->check(CLI::IsMember({"first-col-right", "last-row-left"}));
    c->add_option("--d-convention", g.d_convention)->check(CLI::IsMember({"tddt", "ddt"}));
    c->add_option("--lambda-sign", g.lambda_sign, "lambda = i * sign")->check(CLI::IsMember({-1, 1}));
    c->add_option("--q-trace-sign", g.q_trace_sign, "Tr Q = 2i * sign")->check(CLI::IsMember({-1, 1}));
    c->add_flag("--timings", g.timings, "record wall time per check (makes reports non-reproducible)");
  };

  std::function<int()> action;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc) {
    CLI::App* c = parent->add_subcommand(name, desc);
    add_globals(c);
    return c;
  };
  auto finish = [&](Report& rep) { return rep.finish(out, err); };

  // dn
  CLI::App* dn = app.add_subcommand("dn", "D_N operators from block matrices");
  dn->require_subcommand(1);
  std::string dn_matrix;
  int dn_N = 0, dn_random = 0;
  CLI::App* dn_build = leaf(dn, "build", "build the operator and check its invariants");
  dn_build->add_option("--matrix", dn_matrix, "JSON file with an (N+1)x(N+1) rational matrix");
  dn_build->add_option("--N", dn_N, "size for random matrices (default: cycle 1..4)")->check(CLI::Range(1, 8));
  dn_build->add_option("--random", dn_random, "number of random generic matrices")->check(CLI::PositiveNumber);
  dn_build->callback([&] {
    action = [&] {
      Report rep("dn build", g);
      if (!dn_matrix.empty()) {
        Json j = read_json_file(dn_matrix);
        if (j.is_object()) j = j.at("matrix");
        QMatrix m(j.size(), j.size());
        for (std::size_t r = 0; r < j.size(); ++r) {
          if (j[r].size() != j.size()) throw UsageError("matrix must be square");
          for (std::size_t c = 0; c < j.size(); ++c) m(r, c) = rational_from_json(j[r][c]);
        }
        rep.input()["matrix"] = dn_matrix;
        dn_case(rep, "matrix", weyl::DNMatrix(std::move(m)), g);
      } else {
        const int count = dn_random > 0 ? dn_random : 1;
        rep.input() = {{"random", count}, {"N", dn_N}};
        int degenerate = 0;
        std::uint64_t draw = 0;
        for (int k = 0; k < count; ++k) {
          const int N = dn_N > 0 ? dn_N : 1 + k % 4;
          // Non-squarefree det(I − tA) is not generic; draw again.
          for (;;) {
            const auto a = weyl::DNMatrix::random(N, g.seed * 1000003 + draw++);
            const auto dp = a.det_one_minus_tA();
            if (dp.degree() <= 0 || gcd(dp, dp.derivative()).degree() == 0) {
              dn_case(rep, "random[" + std::to_string(k) + "]", a, g);
              break;
            }
            ++degenerate;
          }
        }
        rep.input()["degenerate_redrawn"] = degenerate;
      }
      return finish(rep);
    };
  });

  // d2
  CLI::App* d2 = app.add_subcommand("d2", "the D2 family of operators");
  d2->require_subcommand(1);
  std::string d2_A = "1", d2_B = "2";
  int d2_K = 8, d2_samples = 50, d2_order = 20;
  CLI::App* d2_verify = leaf(d2, "verify", "recurrence, linearization, discriminant and kernel identities");
  d2_verify->add_option("--A", d2_A);
  d2_verify->add_option("--B", d2_B);
  d2_verify->add_option("--K", d2_K, "linearization window k, l <= K")->check(CLI::Range(0, 20));
  d2_verify->add_option("--samples", d2_samples, "random points for the discriminant identity")->check(CLI::NonNegativeNumber);
  d2_verify->callback([&] {
    action = [&] {
      Report rep("d2 verify", g);
      const dtwo::D2Params p{parse_rational(d2_A), parse_rational(d2_B)};
      if (p.B == 0) throw UsageError("--B must be nonzero");
      rep.input() = {{"A", to_string(p.A)}, {"B", to_string(p.B)}, {"K", d2_K}, {"samples", d2_samples}, {"trunc", g.trunc}};
      rep.check("recurrence", [&](Json& d) {
        const auto s = dtwo::d2_coefficients(p, 2 * d2_K + 2);
        Json b = Json::array();
        for (int n = 0; n <= std::min(3, d2_K); ++n) b.push_back(s.b[static_cast<std::size_t>(n)].str("lambda"));
        d["b"] = b;
        for (const auto& r : dtwo::d2_residual(s))
          if (!r.is_zero()) return false;
        return true;
      });
      rep.check("linearization", [&](Json& d) {
        const auto r = dtwo::d2_check_linearization(p, d2_K);
        d["checked_pairs"] = r.checked_pairs;
        d["failed_pairs"] = r.failed_pairs;
        d["degree_bound_holds"] = r.degree_bound_holds;
        return r.ok();
      });
      rep.check("discriminant", [&](Json& d) {
        const auto r = dtwo::d2_check_discriminant_identity(p, d2_samples, g.seed);
        d["symbolic_ok"] = r.symbolic_ok;
        d["samples"] = r.samples;
        d["sample_failures"] = r.sample_failures;
        return r.ok();
      });
      rep.check("duplication_kernel", [&](Json& d) {
        const auto r = dtwo::d2_duplication_kernel(p, g.trunc);
        d["order"] = g.trunc;
        d["specialization"] = r.specialization_ok;
        d["diagonal"] = r.diagonal_ok;
        d["annihilation_x_z"] = r.annihilation_xz_ok;
        d["annihilation_x_y"] = r.annihilation_xy_ok;
        return r.ok();
      });
      return finish(rep);
    };
  });
  CLI::App* d2_bessel = leaf(d2, "bessel-degenerate", "A = B = 0 and the J0 solution");
  d2_bessel->add_option("--order", d2_order)->check(CLI::Range(0, 200));
  d2_bessel->callback([&] {
    action = [&] {
      Report rep("d2 bessel-degenerate", g);
      rep.input() = {{"order", d2_order}};
      rep.check("residual_vanishes", [&](Json& d) {
        const auto r = dtwo::verify_bessel_degenerate(d2_order);
        d["order"] = r.order;
        return r.ok();
      });
      return finish(rep);
    };
  });

  // clausen
  CLI::App* clausen = app.add_subcommand("clausen", "Clausen's identity for 0F1");
  clausen->require_subcommand(1);
  int cl_n = 100;
  std::string cl_a1 = "1";
  CLI::App* cl_solve = leaf(clausen, "solve", "product identity and the inductive solver");
  cl_solve->add_option("--n", cl_n)->check(CLI::Range(1, 2000));
  cl_solve->add_option("--a1", cl_a1, "a_1 for the solver (a_0 = 1)");
  cl_solve->callback([&] {
    action = [&] {
      Report rep("clausen solve", g);
      const Rational a1 = parse_rational(cl_a1);
      rep.input() = {{"n", cl_n}, {"a1", to_string(a1)}};
      rep.check("product_identity", [&](Json& d) {
        const auto r = dtwo::clausen_product_check(cl_n);
        const std::vector<Rational> shown{make_rational(1), make_rational(2), make_rational(3, 2),
                                          make_rational(5, 9), make_rational(35, 288), make_rational(7, 400)};
        Json head = Json::array();
        bool ok = r.identity_holds;
        for (std::size_t k = 0; k < shown.size() && k < r.square.size(); ++k) {
          head.push_back(to_string(r.square[k]));
          ok = ok && r.square[k] == shown[k];
        }
        d["leading_coefficients"] = head;
        return ok;
      });
      rep.check("solver", [&](Json& d) {
        const auto a = dtwo::clausen_inductive_solver(Rational(1), a1, cl_n);
        Json head = Json::array();
        for (std::size_t k = 0; k < a.size() && k < 8; ++k) head.push_back(to_string(a[k]));
        d["leading_coefficients"] = head;
        if (a1 != 1) return true;
        Integer f = 1;
        for (std::size_t k = 0; k < a.size(); ++k) {
          if (k > 0) f *= static_cast<unsigned long>(k);
          if (a[k] != Rational(1) / Rational(f * f)) return false;
        }
        d["equals_inverse_factorial_squares"] = true;
        return true;
      });
      return finish(rep);
    };
  });

  // conv
  CLI::App* cv = app.add_subcommand("conv", "middle convolution and word scans");
  cv->require_subcommand(1);
  std::string cv_input, cv_lambda = "i", cv_triple = "3,3,3";
  bool cv_gauss = false;
  CLI::App* cv_mc = leaf(cv, "mc", "middle convolution of a tuple");
  cv_mc->add_option("--input", cv_input, "tuple JSON {rank, points, matrices}");
  cv_mc->add_option("--lambda", cv_lambda, "zeta<n>^<k>, i, or a rational");
  cv_mc->add_flag("--gauss", cv_gauss, "use the rank-1 pair (2, zeta6) instead of --input");
  cv_mc->callback([&] {
    action = [&] {
      Report rep("conv mc", g);
      CycloNum lambda;
      try {
        lambda = CycloNum::parse(cv_lambda);
      } catch (const std::exception& e) {
        throw UsageError(std::string("--lambda: ") + e.what());
      }
      conv::LocalSystemTuple t;
      if (cv_gauss) {
        if (cv_lambda == "i" && cv_mc->count("--lambda") == 0) lambda = CycloNum::zeta(3);
        t = conv::LocalSystemTuple({CMatrix{{CycloNum(2)}}, CMatrix{{CycloNum::zeta(4)}}});
        rep.input() = {{"gauss", true}, {"lambda", cstr(lambda)}};
      } else {
        if (cv_input.empty()) throw UsageError("conv mc needs --input or --gauss");
        t = conv::tuple_from_json(read_json_file(cv_input));
        rep.input() = {{"input", cv_input}, {"lambda", cstr(lambda)}};
      }
      rep.check("dimension_formula", [&](Json& d) {
        d["predicted_rank"] = conv::mc_predicted_rank(t, lambda);
        const auto mc = conv::middle_convolution(t, lambda);
        d["rank"] = mc.rank();
        d["tuple"] = conv::to_json(mc);
        return true;
      });
      return finish(rep);
    };
  });
  int scan_len = -1;
  CLI::App* cv_scan = leaf(cv, "scan", "traces, unipotents and projective orders of reduced words");
  cv_scan->add_option("--input", cv_input, "tuple JSON; default is the rank-3 system of --triple");
  cv_scan->add_option("--triple", cv_triple, "Markov point whose rank-3 system is scanned");
  cv_scan->add_option("--max-len,--max-word-len", scan_len)->check(CLI::Range(0, 16));
  cv_scan->callback([&] {
    action = [&] {
      Report rep("conv scan", g);
      const int len = scan_len >= 0 ? scan_len : g.max_word_len;
      conv::ScanOptions so;
      so.max_len = len;
      so.threads = g.threads;
      if (!cv_input.empty()) {
        const auto t = conv::tuple_from_json(read_json_file(cv_input));
        rep.input() = {{"input", cv_input}, {"max_len", len}};
        rep.check("scan", [&](Json& d) {
          d = scan_json(conv::word_scan(t, so));
          return true;
        });
        return finish(rep);
      }
      const auto p = markov::parse_point(cv_triple);
      rep.input() = {{"triple", point_json(p)}, {"max_len", len}};
      std::optional<conv::ScanSummary> s;
      rep.check("rank3_system", [&](Json& d) {
        const auto r = markov::twisted_clausen_pipeline(p, pipeline_options(g, false));
        d["rank"] = r.sym2.rank();
        s = conv::word_scan(r.sym2, so);
        return true;
      });
      if (!s) return finish(rep);
      rep.check("no_unipotent", [&](Json& d) {
        d = scan_json(*s);
        return s->unipotents == 0;
      });
      if (p.is_integral()) {
        rep.check("integral_traces", [&](Json& d) {
          d["all_traces_integral"] = s->all_traces_integral;
          return s->all_traces_integral;
        });
      }
      return finish(rep);
    };
  });

  // markov
  CLI::App* mk = app.add_subcommand("markov", "Markov surface points and the twisted Clausen pipeline");
  mk->require_subcommand(1);
  long long mk_bound = 1000;
  std::string mk_triple;
  int mk_random = 0;
  bool mk_no_scan = false;
  CLI::App* mk_tree = leaf(mk, "tree", "integer solutions by Vieta moves against brute force");
  mk_tree->add_option("--bound", mk_bound)->check(CLI::Range(3LL, 1000000LL));
  mk_tree->callback([&] {
    action = [&] {
      Report rep("markov tree", g);
      rep.input() = {{"bound", mk_bound}};
      const auto tree = markov::markov_tree(mk_bound);
      rep.check("tree_equals_brute_force", [&](Json& d) {
        d["count"] = tree.size();
        d["triples"] = tree;
        return tree == markov::markov_brute_force(mk_bound);
      });
      rep.check("contains_small_triples", [&](Json&) {
        for (const markov::Triple& t : std::vector<markov::Triple>{{3, 3, 3}, {3, 3, 6}, {3, 6, 15}, {3, 15, 39}})
          if (t[2] <= mk_bound && std::find(tree.begin(), tree.end(), t) == tree.end()) return false;
        return true;
      });
      return finish(rep);
    };
  });
  CLI::App* mk_verify = leaf(mk, "verify", "run the pipeline on one point or on random surface points");
  mk_verify->add_option("--triple", mk_triple, "m1,m2,m3 with rational entries");
  mk_verify->add_option("--random", mk_random, "number of random surface points")->check(CLI::PositiveNumber);
  mk_verify->add_option("--max-word-len", g.max_word_len)->check(CLI::Range(0, 16));
  mk_verify->add_flag("--no-scan", mk_no_scan, "skip the word scan");
  mk_verify->callback([&] {
    action = [&] {
      Report rep("markov verify", g);
      if (mk_triple.empty() == (mk_random == 0)) throw UsageError("markov verify needs exactly one of --triple, --random");
      if (!mk_triple.empty()) {
        const auto p = markov::parse_point(mk_triple);
        rep.input() = {{"triple", point_json(p)}, {"max_word_len", g.max_word_len}, {"scan", !mk_no_scan}};
        pipeline_checks(rep, p, pipeline_options(g, !mk_no_scan));
        return finish(rep);
      }
      // Random points: the scan targets integer points, so it is off.
      rep.input() = {{"random", mk_random}};
      std::size_t drawn = 0;
      Json skipped = Json::array();
      std::vector<markov::MarkovPoint> pts;
      for (std::uint64_t round = 0; pts.size() < static_cast<std::size_t>(mk_random); ++round) {
        for (const auto& p : markov::surface_sampler(static_cast<std::size_t>(mk_random), g.seed + round)) {
          if (pts.size() == static_cast<std::size_t>(mk_random)) break;
          ++drawn;
          if (std::find(pts.begin(), pts.end(), p) != pts.end()) continue;
          try {
            const auto r = markov::build_reflection_triple(p, g.q_trace_sign);
            (void)r;
            pts.push_back(p);
          } catch (const MathError& e) {
            skipped.push_back({{"point", point_json(p)}, {"reason", e.what()}});
          }
        }
      }
      rep.input()["drawn"] = drawn;
      rep.input()["degenerate_resampled"] = skipped;
      for (const auto& p : pts) pipeline_checks(rep, p, pipeline_options(g, false));
      return finish(rep);
    };
  });

  // spectral
  CLI::App* sp = app.add_subcommand("spectral", "numerical checks around level 229 and the circle");
  sp->require_subcommand(1);
  std::string sp_y = "0.08,0.1,0.15", sp_q = "2,3,7,11,13", sp_grid = "0.5:5:0.5";
  double sp_tol = -1;
  long sp_pmax = 10000;
  std::size_t sp_samples = 10000;
  CLI::App* sp_maass = leaf(sp, "maass", "functional equation y -> 1/(229 y)");
  sp_maass->add_option("--y", sp_y, "comma-separated heights");
  sp_maass->add_option("--tol", sp_tol, "relative tolerance (default 1e-6)");
  sp_maass->callback([&] {
    action = [&] {
      Report rep("spectral maass", g);
      const double tol = sp_tol > 0 ? sp_tol : 1e-6;
      const auto ys = split_list<double>(sp_y, to_double);
      rep.input() = {{"y", ys}, {"tol", tol}, {"normalization", "K0(2 pi n y)"}};
      for (double y : ys) {
        if (!(y > 0)) throw UsageError("--y values must be positive");
        std::ostringstream name;
        name << "functional_equation[y=" << y << "]";
        rep.check(name.str(), [&](Json& d) {
          const auto r = spectral::functional_equation_check(y, tol);
          d = {{"y", r.y},       {"y_dual", r.y_dual},         {"N", r.N},
               {"N_dual", r.N_dual}, {"tail_bound", r.tail},  {"tail_bound_dual", r.tail_dual},
               {"value", r.value},   {"value_dual", r.value_dual}, {"relative_difference", r.relative_difference}};
          return r.ok();
        });
      }
      return finish(rep);
    };
  });
  CLI::App* sp_circle = leaf(sp, "circle", "Hecke averages of the mod-5 step function");
  sp_circle->add_option("--q", sp_q, "comma-separated q coprime to 5");
  sp_circle->add_option("--samples", sp_samples)->check(CLI::PositiveNumber);
  sp_circle->callback([&] {
    action = [&] {
      Report rep("spectral circle", g);
      const auto qs = split_list<long>(sp_q, [](const std::string& s) { return std::stol(s); });
      rep.input() = {{"q", qs}, {"samples", sp_samples}};
      for (long q : qs) {
        if (q < 2 || q % 5 == 0) throw UsageError("--q values must be >= 2 and coprime to 5");
        rep.check("hecke[q=" + std::to_string(q) + "]", [&](Json& d) {
          const auto r = spectral::circle_hecke_check(q, sp_samples, g.seed);
          d = {{"eigenvalue", r.eigenvalue}, {"samples", r.samples}, {"skipped_breakpoints", r.skipped},
               {"failures", r.failures}};
          return r.ok();
        });
      }
      return finish(rep);
    };
  });
  CLI::App* sp_sonine = leaf(sp, "sonine", "Sonine-Gegenbauer addition formula on a grid");
  sp_sonine->add_option("--grid", sp_grid, "start:stop:step");
  sp_sonine->add_option("--tol", sp_tol, "absolute tolerance (default 1e-8)");
  sp_sonine->callback([&] {
    action = [&] {
      Report rep("spectral sonine", g);
      const double tol = sp_tol > 0 ? sp_tol : 1e-8;
      std::vector<double> gr;
      {
        std::stringstream ss(sp_grid);
        std::string part;
        while (std::getline(ss, part, ':')) gr.push_back(to_double(part));
      }
      if (gr.size() != 3 || !(gr[0] > 0) || !(gr[2] > 0) || gr[1] < gr[0]) throw UsageError("--grid must be start:stop:step with 0 < start <= stop");
      const int steps = static_cast<int>(std::floor((gr[1] - gr[0]) / gr[2] + 1e-9));
      rep.input() = {{"grid", gr}, {"tol", tol}};
      rep.check("addition_formula", [&](Json& d) {
        double worst = 0;
        Json rows = Json::array();
        for (int i = 0; i <= steps; ++i)
          for (int k = i + 1; k <= steps; ++k) {
            const auto r = spectral::sonine_gegenbauer_check(gr[0] + i * gr[2], gr[0] + k * gr[2]);
            worst = std::max(worst, r.error);
            rows.push_back({{"x", r.x}, {"y", r.y}, {"error", r.error}, {"gauss_legendre_5_10_20_30", r.refinement_errors}});
          }
        d["pairs"] = rows.size();
        d["max_error"] = worst;
        d["points"] = rows;
        return worst < tol;
      });
      return finish(rep);
    };
  });
  CLI::App* sp_ap = leaf(sp, "ap", "a_p of the cubic field of discriminant 229");
  sp_ap->add_option("--pmax", sp_pmax)->check(CLI::Range(2L, 1000000L));
  sp_ap->callback([&] {
    action = [&] {
      Report rep("spectral ap", g);
      rep.input() = {{"pmax", sp_pmax}};
      rep.check("root_count_agreement", [&](Json& d) {
        Json table = Json::array();
        bool ok = true;
        for (long p = 2; p < sp_pmax; ++p) {
          if (!spectral::is_prime(p)) continue;
          const int ap = spectral::cubic_ap(p);
          int roots = 0;
          for (long x = 0; x < p; ++x)
            if ((x * x % p * x - 4 * x - 1) % p == 0) ++roots;
          ok = ok && (p == 229 ? ap == 1 : ap == roots - 1);
          table.push_back({p, ap});
        }
        d["primes"] = table.size();
        d["a_p"] = table;
        return ok;
      });
      return finish(rep);
    };
  });

  // selftest
  CLI::App* st = leaf(&app, "selftest", "small examples from every module");
  st->callback([&] {
    action = [&] {
      Report rep("selftest", g);
      selftest(rep, g);
      return finish(rep);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  if (!action) {
    err << "usage error: no subcommand\n";
    return 2;
  }
  try {
    return action();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const MathError& e) {
    err << "check failed: " << e.what() << "\n";
    return 1;
  } catch (const Json::exception& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace clausenlab::cli
