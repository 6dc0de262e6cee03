#include "uavcov/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "uavcov/analytic.hpp"
#include "uavcov/coverage.hpp"
#include "uavcov/inversion.hpp"
#include "uavcov/montecarlo.hpp"
#include "uavcov/sweep.hpp"

namespace uavcov {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

template <class F>
CheckResult timed(const std::string& name, double limit, F&& body) {
  CheckResult r;
  r.name = name;
  r.time_limit = limit;
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream detail;
  try {
    r.pass = body(detail);
  } catch (const std::exception& e) {
    r.pass = false;
    detail << "exception: " << e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit > 0.0 && r.seconds > limit) {
    r.pass = false;
    detail << " runtime " << r.seconds << " s over the " << limit << " s budget";
  }
  r.detail = detail.str();
  return r;
}

McSpec mc_spec(const ValidationOptions& opt, long drops) {
  McSpec s;
  s.n_drops = drops;
  s.seed = opt.seed;
  s.threads = opt.threads;
  return s;
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

// s at which the analytic T0 transform equals one half.
template <class L>
double median_s(L&& laplace) {
  double lo = std::log(1e-30);
  double hi = std::log(1e30);
  for (int i = 0; i < 200 && hi - lo > 1e-6; ++i) {
    const double mid = 0.5 * (lo + hi);
    (laplace(std::exp(mid)) > 0.5 ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

struct Pair {
  const char* name;
  cplx (*F)(cplx);
  double (*f)(double);
};

const Pair kCorpus[] = {
    {"1/s", [](cplx s) { return 1.0 / s; }, [](double) { return 1.0; }},
    {"1/(s+1)", [](cplx s) { return 1.0 / (s + 1.0); }, [](double t) { return std::exp(-t); }},
    {"1/s^2", [](cplx s) { return 1.0 / (s * s); }, [](double t) { return t; }},
    {"exp(-sqrt s)", [](cplx s) { return std::exp(-std::sqrt(s)); },
     [](double t) { return std::exp(-1.0 / (4 * t)) / (2 * std::sqrt(kPi) * std::pow(t, 1.5)); }},
    {"1/(s^2+1)", [](cplx s) { return 1.0 / (s * s + 1.0); }, [](double t) { return std::sin(t); }},
};

bool corpus_check(std::ostream& d) {
  double worst = 0.0;
  for (const auto& p : kCorpus)
    for (double t : {1.0, 2.0, 5.0})
      for (auto m : {InversionMethod::Talbot, InversionMethod::Euler}) {
        InversionSpec spec;
        spec.method = m;
        const double exact = p.f(t);
        worst = std::max(worst, std::abs(invert_laplace(p.F, t, spec) - exact) / std::abs(exact));
      }
  d << "transform pairs: worst relative error " << sci(worst) << " (limit 1e-6)";
  return worst <= 1e-6;
}

bool polynomial_check(std::ostream& d) {
  double worst = 0.0;
  const double t0 = 1.7;
  for (int deg = 1; deg <= 8; ++deg)
    for (int m = 0; m <= deg; ++m) {
      auto poly = [deg](cplx t) {
        cplx out = 0.0;
        for (int j = 0; j <= deg; ++j) out += (j + 1.0) * std::pow(t, j);
        return out;
      };
      double exact = 0.0;
      for (int j = m; j <= deg; ++j) {
        double falling = 1.0;
        for (int i = 0; i < m; ++i) falling *= (j - i);
        exact += (j + 1.0) * falling * std::pow(t0, j - m);
      }
      worst = std::max(worst, std::abs(high_order_derivative(poly, m, t0) - exact) / std::abs(exact));
    }
  d << "polynomial derivatives (order <= 8): worst relative error " << sci(worst) << " (limit 1e-10)";
  return worst <= 1e-10;
}

CheckResult c1(const ValidationOptions&) {
  return timed("1 cell-free erf closed form vs inversion", 10.0, [&](std::ostream& d) {
    auto cfg = NetworkConfig::suburban();
    cfg.alpha = 4.0;
    cfg.lambda = 1e-6;
    const AngleDistribution a = DegenerateAngle{deg_to_rad(5.0)};
    const double om = omega(a, cfg);
    double worst = 0.0;
    for (int n : {1, 4}) {
      cfg.n_antennas = AntennaCount(n);
      for (int b = -20; b <= 20; ++b) {
        cfg.beta = db_to_linear(b);
        const double ref = std::erf(std::pow(kPi, 1.5) * cfg.lambda * om / (2.0 * std::tgamma(n)) *
                                    std::sqrt(cfg.power_mw / (cfg.beta * cfg.noise_mw)) * std::tgamma(n + 0.5));
        worst = std::max(worst, std::abs(p_cf_apil(cfg, a).value - ref) / ref);
      }
    }
    d << "N in {1,4}, beta -20..20 dB (41 points): worst relative error " << sci(worst) << " (limit 1e-6)";
    return worst <= 1e-6;
  });
}

CheckResult c2(const ValidationOptions&) {
  return timed("2 Levy density from the shot transform", 5.0, [&](std::ostream& d) {
    auto cfg = NetworkConfig::suburban();
    cfg.alpha = 4.0;
    cfg.lambda = 1e-6;
    const AngleDistribution ang = DegenerateAngle{deg_to_rad(20.0)};
    const double lw = cfg.lambda * omega(ang, cfg);
    auto F = [&](cplx s) { return laplace_T0_apil(s, cfg, ang, UnitWeight{}); };
    const double scale = std::pow(kPi, 3) * lw * lw / 4.0;
    double worst = 0.0;
    for (double k : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const double z = k * scale;
      const double levy = kPi * lw / (2.0 * std::pow(z, 1.5)) * std::exp(-scale / z);
      worst = std::max(worst, std::abs(invert_laplace(F, z) - levy) / levy);
    }
    d << "5 abscissae: worst relative error " << sci(worst) << " (limit 1e-6)";
    return worst <= 1e-6;
  });
}

CheckResult c3(const ValidationOptions& opt) {
  return timed("3 interference-limited closed form", 60.0, [&](std::ostream& d) {
    auto cfg = NetworkConfig::suburban();
    cfg.noise_mw = 0.0;
    cfg.n_antennas = AntennaCount(1);
    cfg.lambda = 1e-6;
    const AngleDistribution a = DegenerateAngle{deg_to_rad(20.0)};
    const std::vector<double> betas{db_to_linear(-10.0), 1.0, db_to_linear(10.0)};
    const McVariant v{ScenarioSpec::apil(a), cfg.n_antennas};
    const auto est = estimate_p_cov_sweep(cfg, std::span(&v, 1), betas, mc_spec(opt, opt.drops));
    bool ok = true;
    double spread = 0.0;
    for (std::size_t i = 0; i < betas.size(); ++i) {
      const double truth = p_cov_interference_limited(betas[i], cfg.alpha);
      const bool in = est[i].ci_low <= truth && truth <= est[i].ci_high;
      ok = ok && in;
      d << "beta=" << linear_to_db(betas[i]) << "dB exact=" << std::setprecision(6) << truth << " mc=" << est[i].mean
        << " ci=[" << est[i].ci_low << "," << est[i].ci_high << "]" << (in ? "" : " MISS") << "; ";
      for (double lam : {1e-7, 1e-6, 1e-5}) {
        auto c = cfg;
        c.lambda = lam;
        c.beta = betas[i];
        spread = std::max(spread, std::abs(p_cov_apil(c, a).value - truth));
      }
    }
    d << "lambda invariance: max deviation " << sci(spread) << " (limit 1e-9)";
    return ok && spread <= 1e-9;
  });
}

CheckResult c4(const ValidationOptions& opt) {
  return timed("4 nearest-distance laws (KS, level 0.01)", 120.0, [&](std::ostream& d) {
    const long drops = std::min(10000L, opt.drops);
    auto cfg = NetworkConfig::suburban();
    cfg.lambda = 1e-6;
    bool ok = true;
    auto to_y = [&](std::vector<double> r) {
      for (auto& x : r) x = x > 0.0 ? std::pow(x, -2.0 / cfg.alpha) : INFINITY;
      return r;
    };
    {
      auto c = cfg;
      c.ell = 1.0;
      const AngleDistribution a = GammaTanAngle{4.0, deg_to_rad(20.0)};
      const double rate = kPi * c.lambda * mean_cos2(a);
      const auto y = to_y(sample_rstar(c, ScenarioSpec::apil(a), UnitWeight{}, mc_spec(opt, drops)));
      const double ks = ks_statistic(y, [&](double v) { return -std::expm1(-rate * v); });
      const double crit = ks_critical_value(y.size());
      ok = ok && ks < crit;
      d << "APIL exponential law D=" << sci(ks) << " crit=" << sci(crit) << "; ";
    }
    for (double ell : {0.0, 0.25}) {
      auto c = cfg;
      c.ell = ell;
      const AltitudeDistribution h = DegenerateAltitude{40.0};
      const auto y = to_y(sample_rstar(c, ScenarioSpec::apdl(h), UnitWeight{}, mc_spec(opt, drops)));
      const double ks = ks_statistic(y, [&](double v) {
        return std::isinf(v) ? 1.0 : -std::expm1(-kPi * c.lambda * Omega_los(v, h, c));
      });
      const double crit = ks_critical_value(y.size());
      ok = ok && ks < crit;
      d << "APDL H=40 ell=" << ell << " D=" << sci(ks) << " crit=" << sci(crit) << "; ";
    }
    d << drops << " drops each";
    return ok;
  });
}

CheckResult c5(const ValidationOptions& opt) {
  return timed("5 shot-noise transforms vs Monte Carlo", 180.0, [&](std::ostream& d) {
    const auto cfg = NetworkConfig::suburban();
    const WeightModel w = ExpWeight{1.0};
    const AngleDistribution a = DegenerateAngle{deg_to_rad(20.0)};
    const AltitudeDistribution h = DegenerateAltitude{40.0};
    bool ok = true;
    double worst_z = 0.0;
    for (const auto& sc : {ScenarioSpec::apil(a), ScenarioSpec::apdl(h)}) {
      auto analytic = [&](double s, int k) {
        if (sc.is_apil()) return k == 0 ? laplace_T0_apil(s, cfg, a, w) : laplace_TK_apil(s, k, cfg, a, w);
        return k == 0 ? laplace_T0_apdl(s, cfg, h, w) : laplace_TK_apdl(s, k, cfg, h, w);
      };
      const double sm = median_s([&](double s) { return analytic(s, 0); });
      const std::vector<double> svals{sm * std::pow(10.0, -1.5), sm, sm * std::pow(10.0, 1.5)};
      for (int k : {0, 1}) {
        const auto est = estimate_shot_laplace_sweep(svals, k, cfg, sc, w, mc_spec(opt, opt.drops));
        for (std::size_t i = 0; i < svals.size(); ++i) {
          const double an = analytic(svals[i], k);
          const double z = std::abs(an - est[i].mean) / est[i].std_error;
          worst_z = std::max(worst_z, z);
          if (!(z <= 3.0)) {
            ok = false;
            d << (sc.is_apil() ? "APIL" : "APDL") << " K=" << k << " s=" << sci(svals[i]) << " analytic=" << an
              << " mc=" << est[i].mean << " se=" << sci(est[i].std_error) << "; ";
          }
        }
      }
    }
    d << "worst |analytic-mc|/se " << std::setprecision(3) << worst_z << " (limit 3); ";
    double worst = 0.0;
    for (const AngleDistribution& ang : {AngleDistribution{a}, AngleDistribution{GammaTanAngle{4.0, deg_to_rad(20.0)}}})
      for (int k : {1, 2, 4})
        for (double zeta : {0.1, 1.0, 10.0})
          worst = std::max(worst, std::abs(laplace_TK_conditioned_closed(zeta, k, cfg, ang, w) -
                                           laplace_TK_conditioned_direct(zeta, k, cfg, ang, w)));
    d << "conditioned closed form vs Gamma quadrature, K in {1,2,4}: worst " << sci(worst) << " (limit 1e-7)";
    return ok && worst <= 1e-7;
  });
}

CheckResult c6(const ValidationOptions& opt) {
  return timed("6 figure reproduction fig2a/fig4a", 600.0, [&](std::ostream& d) {
    SweepOptions so;
    so.mc = mc_spec(opt, opt.drops);
    so.threads = opt.threads;
    bool ok = true;
    for (const char* id : {"fig2a", "fig4a"}) {
      const Table t = run_figure(id, true, true, so);
      double worst = 0.0;
      std::size_t best = 0;
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        worst = std::max(worst, std::abs(t.number(i, "p_cov_analytic") - t.number(i, "p_cov_mc")));
        if (t.number(i, "p_cov_analytic") > t.number(best, "p_cov_analytic")) best = i;
      }
      ok = ok && worst <= 0.01;
      d << id << ": max |analytic-mc| " << sci(worst) << " over " << t.rows.size() << " points; ";
      if (std::string(id) == "fig2a") {
        const double arg = t.number(best, "theta_bar_deg");
        ok = ok && arg >= 15.0 && arg <= 25.0;
        d << "analytic maximizer " << arg << " deg (window [15,25]); ";
      }
    }
    return ok;
  });
}

CheckResult c7(const ValidationOptions&) {
  return timed("7 insensitivity to the angle and altitude laws", 300.0, [&](std::ostream& d) {
    double wa = 0.0;
    double wh = 0.0;
    auto cfg = figure_config("fig2a").network;
    for (double t : {5.0, 15.0, 30.0, 45.0}) {
      const double th = deg_to_rad(t);
      wa = std::max(wa, std::abs(p_cov_apil(cfg, DegenerateAngle{th}).value -
                                 p_cov_apil(cfg, GammaTanAngle{4.0, th}).value));
    }
    cfg = figure_config("fig4a").network;
    for (double h : {20.0, 40.0, 80.0})
      wh = std::max(wh, std::abs(p_cov_apdl(cfg, DegenerateAltitude{h}).value -
                                 p_cov_apdl(cfg, UniformAltitude{h, 5.0}).value));
    d << "angle: max gap " << sci(wa) << "; altitude: max gap " << sci(wh) << " (limit 0.05)";
    return wa < 0.05 && wh < 0.05;
  });
}

CheckResult c8(const ValidationOptions&) {
  return timed("8 monotonicity and dominance", 300.0, [&](std::ostream& d) {
    constexpr double slack = 1e-9;
    const auto betas = make_grid(-20.0, 20.0, 20, false);
    const auto base = NetworkConfig::suburban();
    const AngleDistribution a = DegenerateAngle{deg_to_rad(20.0)};
    const AltitudeDistribution h = DegenerateAltitude{40.0};
    const std::vector<AntennaCount> ns{AntennaCount(1), AntennaCount(2), AntennaCount(4), AntennaCount(8),
                                       AntennaCount::infinite()};
    int beta_bad = 0, n_bad = 0, n_inf_bad = 0, cf_bad = 0, bound1_bad = 0, bound4_bad = 0;
    int beta_tot = 0, n_tot = 0, n_inf_tot = 0, cf_tot = 0, bound_tot = 0;
    auto count_beta = [&](const std::vector<double>& s) {
      for (std::size_t i = 1; i < s.size(); ++i, ++beta_tot)
        if (s[i] > s[i - 1] + slack) ++beta_bad;
    };
    for (const auto& sc : {ScenarioSpec::apil(a), ScenarioSpec::apdl(h)}) {
      std::vector<std::vector<double>> cov(ns.size());
      std::vector<double> cf, b1, b4;
      for (std::size_t j = 0; j < ns.size(); ++j)
        for (double bdb : betas) {
          auto c = base;
          c.beta = db_to_linear(bdb);
          c.n_antennas = ns[j];
          cov[j].push_back(coverage(c, sc).value);
          if (ns[j] == AntennaCount(4)) {
            cf.push_back(coverage_cellfree(c, sc).value);
            b4.push_back(coverage_lower_bound(c, sc).value);
          }
          if (ns[j] == AntennaCount(1)) b1.push_back(coverage_lower_bound(c, sc).value);
        }
      for (const auto& s : cov) count_beta(s);
      count_beta(cf);
      count_beta(b1);
      count_beta(b4);
      for (std::size_t i = 0; i < betas.size(); ++i) {
        for (std::size_t j = 1; j + 1 < ns.size(); ++j, ++n_tot)
          if (cov[j - 1][i] > cov[j][i] + slack) ++n_bad;
        ++n_inf_tot;
        if (cov[ns.size() - 2][i] > cov.back()[i] + slack) ++n_inf_bad;
        ++cf_tot;
        if (cf[i] + slack < cov[2][i]) ++cf_bad;
        ++bound_tot;
        if (b1[i] > cov[0][i] + slack) ++bound1_bad;
        if (b4[i] > cov[2][i] + slack) ++bound4_bad;
      }
    }
    d << "violations: beta " << beta_bad << "/" << beta_tot << ", N finite " << n_bad << "/" << n_tot
      << ", N=8 vs inf " << n_inf_bad << "/" << n_inf_tot << ", cell-free " << cf_bad << "/" << cf_tot
      << ", bound N=1 " << bound1_bad << "/" << bound_tot << ", bound N=4 " << bound4_bad << "/" << bound_tot;
    return beta_bad + n_bad + n_inf_bad + cf_bad + bound1_bad + bound4_bad == 0;
  });
}

CheckResult c9(const ValidationOptions&) {
  return timed("9 inversion and derivative self-test", 1.0, [&](std::ostream& d) {
    const bool a = corpus_check(d);
    d << "; ";
    const bool b = polynomial_check(d);
    return a && b;
  });
}

}  // namespace

CheckResult acceptance_criterion(int id, const ValidationOptions& opt) {
  switch (id) {
    case 1: return c1(opt);
    case 2: return c2(opt);
    case 3: return c3(opt);
    case 4: return c4(opt);
    case 5: return c5(opt);
    case 6: return c6(opt);
    case 7: return c7(opt);
    case 8: return c8(opt);
    case 9: return c9(opt);
    default: throw ConfigError("acceptance criteria are numbered 1.." + std::to_string(kAcceptanceCount));
  }
}

std::vector<CheckResult> run_selftest() {
  return {timed("inversion corpus", 0.0, corpus_check), timed("contour derivative of polynomials", 0.0, polynomial_check)};
}

std::vector<CheckResult> run_validation(const RunConfig& rc, const ValidationOptions& opt) {
  const auto& cfg = rc.network;
  const auto& sc = rc.scenario;
  const McSpec spec = mc_spec(opt, opt.drops);
  std::vector<CheckResult> out;
  out.push_back(timed("coverage analytic vs Monte Carlo (+-0.01)", 0.0, [&](std::ostream& d) {
    const double an = coverage(cfg, sc).value;
    const auto e = estimate_p_cov(cfg, sc, spec);
    d << "analytic=" << an << " mc=" << e.mean << " se=" << sci(e.std_error);
    return std::abs(an - e.mean) <= 0.01;
  }));
  out.push_back(timed("massive-array limit vs unit-gain Monte Carlo (+-0.01)", 0.0, [&](std::ostream& d) {
    auto c = cfg;
    c.n_antennas = AntennaCount::infinite();
    const double an = coverage(c, sc).value;
    const auto e = estimate_p_cov(c, sc, spec);
    d << "analytic=" << an << " mc=" << e.mean;
    return std::abs(an - e.mean) <= 0.01;
  }));
  out.push_back(timed("cell-free analytic vs Monte Carlo (+-0.01)", 0.0, [&](std::ostream& d) {
    const double an = coverage_cellfree(cfg, sc).value;
    const auto e = estimate_p_cf(cfg, sc, spec);
    d << "analytic=" << an << " mc=" << e.mean;
    return std::abs(an - e.mean) <= 0.01;
  }));
  out.push_back(timed("interference-limited closed form within the MC interval", 0.0, [&](std::ostream& d) {
    auto c = cfg;
    c.noise_mw = 0.0;
    c.n_antennas = AntennaCount(1);
    const ScenarioSpec s = sc.is_apil() ? sc : ScenarioSpec::apil(DegenerateAngle{deg_to_rad(20.0)});
    const double truth = p_cov_interference_limited(c.beta, c.alpha);
    const auto e = estimate_p_cov(c, s, spec);
    d << "exact=" << truth << " ci=[" << e.ci_low << "," << e.ci_high << "]";
    return e.ci_low <= truth && truth <= e.ci_high;
  }));
  out.push_back(timed("nearest effective distance law (KS 0.01)", 0.0, [&](std::ostream& d) {
    const auto r = sample_rstar(cfg, sc, UnitWeight{}, mc_spec(opt, std::min(opt.drops, 10000L)));
    std::vector<double> y;
    for (double x : r) y.push_back(x > 0.0 ? std::pow(x, -2.0 / cfg.alpha) : INFINITY);
    const double om = sc.is_apil() ? omega(sc.angle(), cfg) : 0.0;
    const double ks = ks_statistic(y, [&](double v) {
      if (std::isinf(v)) return 1.0;
      const double m = sc.is_apil() ? om * v : Omega_los(v, sc.altitude(), cfg);
      return -std::expm1(-kPi * cfg.lambda * m);
    });
    d << "D=" << sci(ks) << " crit=" << sci(ks_critical_value(y.size()));
    return ks < ks_critical_value(y.size());
  }));
  out.push_back(timed("shot transforms T0 and T1 within 3 standard errors", 0.0, [&](std::ostream& d) {
    const WeightModel w = ExpWeight{1.0};
    auto analytic = [&](double s, int k) {
      if (sc.is_apil()) return k == 0 ? laplace_T0_apil(s, cfg, sc.angle(), w) : laplace_TK_apil(s, k, cfg, sc.angle(), w);
      return k == 0 ? laplace_T0_apdl(s, cfg, sc.altitude(), w) : laplace_TK_apdl(s, k, cfg, sc.altitude(), w);
    };
    const double s = median_s([&](double x) { return analytic(x, 0); });
    bool ok = true;
    for (int k : {0, 1}) {
      const auto e = estimate_shot_laplace(s, k, cfg, sc, w, spec);
      const double an = analytic(s, k);
      d << "K=" << k << " analytic=" << an << " mc=" << e.mean << " se=" << sci(e.std_error) << "; ";
      ok = ok && std::abs(an - e.mean) <= 3.0 * e.std_error;
    }
    return ok;
  }));
  return out;
}

void print_results(std::ostream& os, const std::vector<CheckResult>& results) {
  for (const auto& r : results) {
    os << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << std::fixed << std::setprecision(2) << r.seconds << " s";
    os.unsetf(std::ios::fixed);
    if (r.time_limit > 0.0) os << ", budget " << r.time_limit << " s";
    os << ")";
    if (!r.detail.empty()) os << ": " << r.detail;
    os << '\n';
  }
}

}  // namespace uavcov
