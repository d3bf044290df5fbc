// Command line front end for the cclqg shared library.
//
// Subcommands:
//   steady     stationary filter summaries per subsystem group
//   allocate   capacity sweep: water-filled budgets, cost, feasibility, SVG plots
//   simulate   Monte Carlo comparison of agent loss against the analytic curve
//   reproduce  built-in experiment presets (case1..case4)
//
// Exit codes: 0 success, 2 validation/config error, 3 construction conditions
// failed, 4 empirical/analytic comparison failed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cclqg.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitConditions = 3;
constexpr int kExitComparison = 4;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, std::string message) { throw CliError{code, std::move(message)}; }

void check(int rc, const std::string& what) {
  if (rc == CCLQG_OK) return;
  int code = rc == CCLQG_ERR_CONDITION_VIOLATED ? kExitConditions : kExitValidation;
  std::string detail = cclqg_last_error();
  std::string msg = what + ": " + cclqg_error_name(rc);
  if (!detail.empty()) msg += " (" + detail + ")";
  fail(code, msg);
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string column_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '"' || c == '\n' || c == '\r') c = '_';
  return s;
}

struct ConfigHandle {
  cclqg_config* h = nullptr;
  ~ConfigHandle() { cclqg_config_free(h); }
};
struct SystemHandle {
  cclqg_system* h = nullptr;
  ~SystemHandle() { cclqg_system_free(h); }
};
struct SteadyHandle {
  cclqg_steady* h = nullptr;
  ~SteadyHandle() { cclqg_steady_free(h); }
};
struct AllocHandle {
  cclqg_alloc* h = nullptr;
  ~AllocHandle() { cclqg_alloc_free(h); }
};
struct PredictorHandle {
  cclqg_predictor* h = nullptr;
  ~PredictorHandle() { cclqg_predictor_free(h); }
};
struct ReportHandle {
  cclqg_report* h = nullptr;
  ~ReportHandle() { cclqg_report_free(h); }
};

struct Options {
  std::string config_path;
  int scale = 1;
  std::string unit;
  uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
  bool direct_predictor = false;
};

struct GroupMeta {
  std::string label;
  int dim = 0;
  int mult = 0;
};

struct Loaded {
  ConfigHandle cfg;
  SystemHandle sys;
  std::vector<GroupMeta> groups;
  std::filesystem::path out;
};

std::string getter_string(int (*fn)(const cclqg_config*, char*, size_t), const cclqg_config* cfg,
                          const std::string& what) {
  char buf[512];
  check(fn(cfg, buf, sizeof buf), what);
  return buf;
}

void load_into(Loaded& L, const Options& opts, const std::string& inline_json) {
  if (!inline_json.empty())
    check(cclqg_config_parse(inline_json.c_str(), &L.cfg.h), "parsing built-in config");
  else if (!opts.config_path.empty())
    check(cclqg_config_load(opts.config_path.c_str(), &L.cfg.h),
          "loading config " + opts.config_path);
  else
    fail(kExitValidation, "a --config file is required");

  if (!opts.unit.empty()) check(cclqg_config_set_unit(L.cfg.h, opts.unit.c_str()), "setting unit");
  if (opts.seed_set) check(cclqg_config_set_seed(L.cfg.h, opts.seed), "setting seed");
  if (opts.scale != 1) check(cclqg_config_scale(L.cfg.h, opts.scale), "applying --scale");

  check(cclqg_config_build_system(L.cfg.h, &L.sys.h), "building the system");

  int violations = 0;
  check(cclqg_system_validate(L.sys.h, &violations), "validating the system");
  if (violations > 0) {
    std::string msg = "system validation failed:";
    for (int i = 0; i < violations; ++i) {
      char buf[256];
      double value = 0.0;
      if (cclqg_system_violation(L.sys.h, i, buf, sizeof buf, &value) == CCLQG_OK)
        msg += std::string("\n  ") + buf + " (worst value " + short_num(value) + ")";
    }
    fail(kExitValidation, msg);
  }

  int n_groups = 0;
  check(cclqg_group_count(L.sys.h, &n_groups), "reading group structure");
  for (int i = 0; i < n_groups; ++i) {
    GroupMeta g;
    char label[128];
    check(cclqg_group_info(L.sys.h, i, label, sizeof label, &g.dim, &g.mult), "reading group info");
    g.label = label;
    L.groups.push_back(std::move(g));
  }

  std::string dir = opts.out_dir.empty()
                        ? getter_string(cclqg_config_out_dir, L.cfg.h, "reading output dir")
                        : opts.out_dir;
  L.out = dir;
  std::error_code ec;
  std::filesystem::create_directories(L.out, ec);
  if (ec) fail(kExitValidation, "cannot create output directory " + dir + ": " + ec.message());
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(kExitValidation, "cannot open " + path.string() + " for writing");
  return os;
}

/* ---------------------------------------------------------------- SVG ---- */

// Minimal deterministic SVG plotter: fixed canvas, linear axes, no text
// shaping, every coordinate printed with %.6g.
class SvgPlot {
 public:
  SvgPlot(double x_lo, double x_hi, double y_lo, double y_hi, std::string x_label,
          std::string y_label)
      : x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi) {
    if (!(x_hi_ > x_lo_)) x_hi_ = x_lo_ + 1.0;
    if (!(y_hi_ > y_lo_)) y_hi_ = y_lo_ + 1.0;
    double pad = 0.04 * (y_hi_ - y_lo_);
    y_hi_ += pad;
    if (y_lo_ != 0.0) y_lo_ -= pad;
    x_label_ = std::move(x_label);
    y_label_ = std::move(y_label);
  }

  double px(double x) const { return kLeft + (x - x_lo_) / (x_hi_ - x_lo_) * plot_w(); }
  double py(double y) const { return kTop + (y_hi_ - y) / (y_hi_ - y_lo_) * plot_h(); }

  void band(double x0, double x1, const std::string& fill, double opacity) {
    double a = std::max(x_lo_, x0), b = std::min(x_hi_, x1);
    if (!(b > a)) return;
    body_ << "<rect x=\"" << short_num(px(a)) << "\" y=\"" << short_num(kTop) << "\" width=\""
          << short_num(px(b) - px(a)) << "\" height=\"" << short_num(plot_h()) << "\" fill=\""
          << fill << "\" fill-opacity=\"" << short_num(opacity) << "\"/>\n";
  }

  void area_between(const std::vector<double>& xs, const std::vector<double>& lo,
                    const std::vector<double>& hi, const std::string& fill) {
    if (xs.size() < 2) return;
    body_ << "<path d=\"M";
    for (std::size_t i = 0; i < xs.size(); ++i)
      body_ << (i ? " L" : "") << short_num(px(xs[i])) << ' ' << short_num(py(hi[i]));
    for (std::size_t i = xs.size(); i-- > 0;)
      body_ << " L" << short_num(px(xs[i])) << ' ' << short_num(py(lo[i]));
    body_ << " Z\" fill=\"" << fill << "\" fill-opacity=\"0.75\" stroke=\"none\"/>\n";
  }

  void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                const std::string& color, bool dashed = false) {
    if (xs.empty()) return;
    body_ << "<polyline points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i)
      body_ << (i ? " " : "") << short_num(px(xs[i])) << ',' << short_num(py(ys[i]));
    body_ << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\"";
    if (dashed) body_ << " stroke-dasharray=\"6 4\"";
    body_ << "/>\n";
  }

  void hline(double y, const std::string& color) {
    if (y < y_lo_ || y > y_hi_) return;
    std::vector<double> xs{x_lo_, x_hi_}, ys{y, y};
    polyline(xs, ys, color, true);
  }

  void legend(const std::vector<std::pair<std::string, std::string>>& entries) {
    double y = kTop + 14;
    for (const auto& [label, color] : entries) {
      body_ << "<rect x=\"" << short_num(kLeft + 10) << "\" y=\"" << short_num(y - 9)
            << "\" width=\"11\" height=\"11\" fill=\"" << color << "\"/>\n";
      text(kLeft + 26, y, label, "start");
      y += 17;
    }
  }

  std::string render() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" fill=\"white\"/>\n";
    os << body_.str();
    std::ostringstream axes;
    render_axes(axes);
    os << axes.str();
    os << "</svg>\n";
    return os.str();
  }

 private:
  static constexpr double kWidth = 640, kHeight = 420;
  static constexpr double kLeft = 64, kRight = 18, kTop = 18, kBottom = 46;
  double plot_w() const { return kWidth - kLeft - kRight; }
  double plot_h() const { return kHeight - kTop - kBottom; }

  void text(double x, double y, const std::string& s, const char* anchor,
            const char* extra = "") {
    body_ << "<text x=\"" << short_num(x) << "\" y=\"" << short_num(y) << "\" text-anchor=\""
          << anchor << "\"" << extra << ">" << s << "</text>\n";
  }

  static std::vector<double> ticks(double lo, double hi) {
    double span = hi - lo;
    double raw = span / 5.0;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
      if (mag * m >= raw) {
        step = mag * m;
        break;
      }
    std::vector<double> out;
    double first = std::ceil(lo / step) * step;
    for (double v = first; v <= hi + 1e-9 * span; v += step) out.push_back(v);
    return out;
  }

  void render_axes(std::ostringstream& os) const {
    os << "<rect x=\"" << short_num(kLeft) << "\" y=\"" << short_num(kTop) << "\" width=\""
       << short_num(plot_w()) << "\" height=\"" << short_num(plot_h())
       << "\" fill=\"none\" stroke=\"#222\" stroke-width=\"1\"/>\n";
    for (double v : ticks(x_lo_, x_hi_)) {
      double x = px(v);
      os << "<line x1=\"" << short_num(x) << "\" y1=\"" << short_num(kTop + plot_h()) << "\" x2=\""
         << short_num(x) << "\" y2=\"" << short_num(kTop + plot_h() + 5)
         << "\" stroke=\"#222\"/>\n";
      os << "<text x=\"" << short_num(x) << "\" y=\"" << short_num(kTop + plot_h() + 19)
         << "\" text-anchor=\"middle\">" << short_num(v) << "</text>\n";
    }
    for (double v : ticks(y_lo_, y_hi_)) {
      double y = py(v);
      os << "<line x1=\"" << short_num(kLeft - 5) << "\" y1=\"" << short_num(y) << "\" x2=\""
         << short_num(kLeft) << "\" y2=\"" << short_num(y) << "\" stroke=\"#222\"/>\n";
      os << "<text x=\"" << short_num(kLeft - 9) << "\" y=\"" << short_num(y + 4)
         << "\" text-anchor=\"end\">" << short_num(v) << "</text>\n";
    }
    os << "<text x=\"" << short_num(kLeft + plot_w() / 2) << "\" y=\"" << short_num(kHeight - 10)
       << "\" text-anchor=\"middle\">" << x_label_ << "</text>\n";
    os << "<text x=\"14\" y=\"" << short_num(kTop + plot_h() / 2)
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
       << short_num(kTop + plot_h() / 2) << ")\">" << y_label_ << "</text>\n";
  }

  double x_lo_, x_hi_, y_lo_, y_hi_;
  std::string x_label_, y_label_;
  std::ostringstream body_;
};

const char* kPalette[] = {"#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

// Merge contiguous infeasible grid points into shaded x-ranges.
std::vector<std::pair<double, double>> infeasible_ranges(const std::vector<double>& xs,
                                                         const std::vector<char>& feasible) {
  std::vector<std::pair<double, double>> out;
  auto edge_lo = [&](std::size_t i) {
    return i == 0 ? xs.front() : 0.5 * (xs[i - 1] + xs[i]);
  };
  auto edge_hi = [&](std::size_t i) {
    return i + 1 == xs.size() ? xs.back() : 0.5 * (xs[i] + xs[i + 1]);
  };
  for (std::size_t i = 0; i < xs.size();) {
    if (feasible[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < xs.size() && !feasible[j + 1]) ++j;
    out.emplace_back(edge_lo(i), edge_hi(j));
    i = j + 1;
  }
  return out;
}

/* ------------------------------------------------------------- steady ---- */

int cmd_steady(const Options& opts, const std::string& inline_json = "") {
  Loaded L;
  load_into(L, opts, inline_json);

  auto path = L.out / "steady.csv";
  {
    auto os = open_out(path);
    os << "label,dim,mult,trace_sigma,trace_p,trace_m,trace_k,trace_l\n";
    for (std::size_t i = 0; i < L.groups.size(); ++i) {
      double traces[5];
      check(cclqg_group_traces(L.sys.h, static_cast<int>(i), traces), "computing group traces");
      os << column_safe(L.groups[i].label) << ',' << L.groups[i].dim << ',' << L.groups[i].mult;
      for (double t : traces) os << ',' << num(t);
      os << '\n';
    }
  }
  std::printf("wrote %s\n", path.string().c_str());

  int dim = 0;
  check(cclqg_system_dim(L.sys.h, &dim), "reading system dimension");
  if (dim <= 12) {
    SteadyHandle ss;
    check(cclqg_steady_compute(L.sys.h, &ss.h), "solving the stationary equations");
    auto mpath = L.out / "steady_matrices.csv";
    auto os = open_out(mpath);
    os << "matrix,row,col,value\n";
    const char* names[] = {"sigma", "p", "m", "k", "l"};
    const int sel[] = {CCLQG_MAT_SIGMA, CCLQG_MAT_P, CCLQG_MAT_M, CCLQG_MAT_K, CCLQG_MAT_L};
    std::vector<double> buf(static_cast<std::size_t>(dim) * dim);
    for (int w = 0; w < 5; ++w) {
      check(cclqg_steady_matrix(ss.h, sel[w], buf.data()), "reading a stationary matrix");
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
          os << names[w] << ',' << r << ',' << c << ','
             << num(buf[static_cast<std::size_t>(r) * dim + c]) << '\n';
    }
    std::printf("wrote %s\n", mpath.string().c_str());
  }
  return kExitOk;
}

/* ----------------------------------------------------------- allocate ---- */

int cmd_allocate(const Options& opts, const std::string& inline_json = "") {
  Loaded L;
  load_into(L, opts, inline_json);

  int grid_n = 0;
  check(cclqg_config_grid_count(L.cfg.h, &grid_n), "reading capacity grid");
  const std::size_t n_groups = L.groups.size();
  const bool with_ratio = n_groups == 2;

  std::vector<double> plot_b;                          // finite grid points, nats
  std::vector<std::vector<double>> plot_totals(n_groups);
  std::vector<double> plot_cost;
  std::vector<double> plot_ratio;
  std::vector<char> plot_feasible;

  auto path = L.out / "allocation.csv";
  {
    auto os = open_out(path);
    os << "B,b_nats,cost,distortion,capacity_used,feasible";
    for (const auto& g : L.groups) {
      std::string l = column_safe(g.label);
      os << ",budget_" << l << "_nats,budget_" << l << "_bits,total_" << l << "_nats,feasible_"
         << l;
    }
    if (with_ratio) os << ",budget_ratio";
    os << '\n';

    for (int i = 0; i < grid_n; ++i) {
      double raw = 0.0, nats = 0.0;
      check(cclqg_config_grid_value(L.cfg.h, i, &raw, &nats), "reading grid value");
      AllocHandle al;
      check(cclqg_allocate(L.sys.h, nats, &al.h), "allocating capacity");
      double cost = 0, dist = 0, eta = 0, used = 0;
      int feasible = 0, infinite = 0;
      check(cclqg_alloc_summary(al.h, &cost, &dist, &eta, &used, &feasible, &infinite),
            "reading allocation summary");
      os << num(raw) << ',' << num(nats) << ',' << num(cost) << ',' << num(dist) << ','
         << num(used) << ',' << feasible;

      std::vector<double> totals(n_groups, 0.0);
      for (std::size_t g = 0; g < n_groups; ++g) {
        char label[128];
        double block = 0, total = 0;
        int gfeas = 0;
        check(cclqg_alloc_group(al.h, static_cast<int>(g), label, sizeof label, &block, &total,
                                &gfeas),
              "reading group allocation");
        totals[g] = total;
        os << ',' << num(block) << ',' << num(block / std::log(2.0)) << ',' << num(total) << ','
           << gfeas;
      }
      double ratio = std::numeric_limits<double>::quiet_NaN();
      if (with_ratio) {
        if (totals[1] > 0.0 && std::isfinite(totals[0]) && std::isfinite(totals[1]))
          ratio = totals[0] / totals[1];
        os << ',' << (std::isnan(ratio) ? std::string() : num(ratio));
      }
      os << '\n';

      if (std::isfinite(nats)) {
        plot_b.push_back(nats);
        for (std::size_t g = 0; g < n_groups; ++g) plot_totals[g].push_back(totals[g]);
        plot_cost.push_back(cost);
        plot_feasible.push_back(static_cast<char>(feasible != 0));
        if (with_ratio) plot_ratio.push_back(ratio);
      }
    }
  }
  std::printf("wrote %s\n", path.string().c_str());

  if (plot_b.size() >= 2) {
    auto shade = infeasible_ranges(plot_b, plot_feasible);

    {  // stacked capacity shares
      std::vector<std::vector<double>> cum(n_groups + 1,
                                           std::vector<double>(plot_b.size(), 0.0));
      double top = 0.0;
      for (std::size_t g = 0; g < n_groups; ++g)
        for (std::size_t i = 0; i < plot_b.size(); ++i) {
          cum[g + 1][i] = cum[g][i] + plot_totals[g][i];
          top = std::max(top, cum[g + 1][i]);
        }
      SvgPlot p(plot_b.front(), plot_b.back(), 0.0, top, "total capacity B (nats)",
                "allocated capacity (nats)");
      for (auto [a, b] : shade) p.band(a, b, "#999999", 0.45);
      std::vector<std::pair<std::string, std::string>> legend;
      for (std::size_t g = 0; g < n_groups; ++g) {
        const char* color = kPalette[g % (sizeof kPalette / sizeof *kPalette)];
        p.area_between(plot_b, cum[g], cum[g + 1], color);
        legend.emplace_back(column_safe(L.groups[g].label), color);
      }
      p.legend(legend);
      auto sp = L.out / "allocation.svg";
      open_out(sp) << p.render();
      std::printf("wrote %s\n", sp.string().c_str());
    }

    {  // cost curve
      double lo = plot_cost.front(), hi = plot_cost.front();
      for (double c : plot_cost) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
      }
      SvgPlot p(plot_b.front(), plot_b.back(), std::min(0.0, lo), hi, "total capacity B (nats)",
                "asymptotic cost");
      for (auto [a, b] : shade) p.band(a, b, "#999999", 0.45);
      p.polyline(plot_b, plot_cost, kPalette[2]);
      auto sp = L.out / "cost.svg";
      open_out(sp) << p.render();
      std::printf("wrote %s\n", sp.string().c_str());
    }

    if (with_ratio) {  // two-group capacity ratio
      std::vector<double> xs, ys;
      double hi = 2.0;
      for (std::size_t i = 0; i < plot_b.size(); ++i)
        if (!std::isnan(plot_ratio[i])) {
          xs.push_back(plot_b[i]);
          ys.push_back(plot_ratio[i]);
          hi = std::max(hi, plot_ratio[i]);
        }
      if (xs.size() >= 2) {
        SvgPlot p(plot_b.front(), plot_b.back(), 0.0, hi, "total capacity B (nats)",
                  "capacity ratio " + column_safe(L.groups[0].label) + " / " +
                      column_safe(L.groups[1].label));
        for (auto [a, b] : shade) p.band(a, b, "#999999", 0.45);
        p.hline(2.0, "#444444");
        p.polyline(xs, ys, kPalette[0]);
        auto sp = L.out / "ratio.svg";
        open_out(sp) << p.render();
        std::printf("wrote %s\n", sp.string().c_str());
      }
    }
  }
  return kExitOk;
}

/* ----------------------------------------------------------- simulate ---- */

int cmd_simulate(const Options& opts, const std::string& inline_json = "") {
  Loaded L;
  load_into(L, opts, inline_json);

  int horizon = 0, n = 0, burn = 0, grid_n = 0;
  uint64_t seed = 0;
  double tol = 0.0;
  check(cclqg_config_horizon(L.cfg.h, &horizon), "reading horizon");
  check(cclqg_config_sample_count(L.cfg.h, &n), "reading trajectory count");
  check(cclqg_config_seed(L.cfg.h, &seed), "reading seed");
  check(cclqg_config_burn_in(L.cfg.h, &burn), "reading burn-in");
  check(cclqg_config_tol_sigma(L.cfg.h, &tol), "reading tolerance");
  check(cclqg_config_grid_count(L.cfg.h, &grid_n), "reading capacity grid");
  std::string mode = getter_string(cclqg_config_mode, L.cfg.h, "reading mode");
  if (burn < 0) check(cclqg_default_burn_in(L.sys.h, &burn), "choosing a burn-in");

  const bool steady_mode = mode == "steady";
  SteadyHandle ss;
  if (steady_mode) check(cclqg_steady_compute(L.sys.h, &ss.h), "solving the stationary equations");

  auto spath = L.out / "simulate_summary.csv";
  auto os = open_out(spath);
  os << "index,B,b_nats,predictor,horizon,n,seed,burn_in,timeavg_analytic,timeavg_empirical,"
        "timeavg_se,timeavg_z,pass,worst_step,worst_z\n";

  bool all_pass = true;
  int first_bad = -1;
  double first_bad_b = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    double raw = 0.0, nats = 0.0;
    check(cclqg_config_grid_value(L.cfg.h, i, &raw, &nats), "reading grid value");

    if (!opts.direct_predictor) {
      if (steady_mode) {
        int overall = 0, active = 0;
        double resid = 0, witness = 0;
        check(cclqg_ss_conditions(ss.h, nats, &overall, &active, &resid, &witness),
              "checking construction conditions");
        if (!overall)
          fail(kExitConditions,
               "construction conditions fail at B = " + num(nats) +
                   " nats (active modes " + std::to_string(active) + ", range residual " +
                   short_num(resid) + ", order witness " + short_num(witness) +
                   "); rerun with --direct-predictor for the oracle-access baseline");
      } else {
        int overall = 0, first = 0;
        check(cclqg_c3l_conditions(L.sys.h, nats, horizon, &overall, &first),
              "checking construction conditions");
        if (!overall)
          fail(kExitConditions, "construction conditions fail at B = " + num(nats) +
                                    " nats, first failing step " + std::to_string(first) +
                                    "; rerun with --direct-predictor for the oracle-access "
                                    "baseline");
      }
    }

    PredictorHandle pred;
    const char* kind;
    if (opts.direct_predictor) {
      kind = "direct";
      check(steady_mode ? cclqg_predictor_steady_direct(L.sys.h, nats, &pred.h)
                        : cclqg_predictor_finite_direct(L.sys.h, nats, horizon, &pred.h),
            "building the oracle-access predictor");
    } else {
      kind = "agent";
      check(steady_mode ? cclqg_predictor_steady_agent(L.sys.h, nats, &pred.h)
                        : cclqg_predictor_finite_agent(L.sys.h, nats, horizon, &pred.h),
            "building the agent");
    }

    ReportHandle rep;
    check(cclqg_run_experiment(L.sys.h, pred.h, horizon, n, seed, burn, &rep.h),
          "running the experiment");
    auto rpath = L.out / ("simulate_" + std::to_string(i) + ".csv");
    check(cclqg_report_write_csv(rep.h, rpath.string().c_str()), "writing the report");
    std::printf("wrote %s\n", rpath.string().c_str());

    double ta = 0, te = 0, tse = 0, tz = 0;
    check(cclqg_report_timeavg(rep.h, &ta, &te, &tse, &tz), "reading the time average");
    int pass = 0, worst_step = 0;
    double worst_z = 0;
    check(cclqg_report_compare(rep.h, tol, &pass, &worst_step, &worst_z),
          "comparing empirical and analytic loss");

    os << i << ',' << num(raw) << ',' << num(nats) << ',' << kind << ',' << horizon << ',' << n
       << ',' << seed << ',' << burn << ',' << num(ta) << ',' << num(te) << ',' << num(tse) << ','
       << num(tz) << ',' << pass << ',' << worst_step << ',' << num(worst_z) << '\n';
    if (!pass) {
      all_pass = false;
      if (first_bad < 0) {
        first_bad = worst_step;
        first_bad_b = nats;
      }
    }
  }
  os.close();
  std::printf("wrote %s\n", spath.string().c_str());

  if (!all_pass)
    fail(kExitComparison, "empirical loss disagrees with the analytic curve (first failure at B = " +
                              num(first_bad_b) + " nats, step " + std::to_string(first_bad) +
                              "); see " + spath.string());
  return kExitOk;
}

/* ---------------------------------------------------------- reproduce ---- */

std::string grid_json(double lo, double hi, double step) {
  std::string out = "[";
  bool first = true;
  for (double v = lo; v <= hi + 1e-9; v += step) {
    if (!first) out += ',';
    out += short_num(v);
    first = false;
  }
  return out + "]";
}

std::string scalar_group(const char* label, double a, double c, double s2w, double s2v) {
  std::ostringstream os;
  os << "{\"label\":\"" << label << "\",\"a\":" << short_num(a) << ",\"c\":" << short_num(c)
     << ",\"s2w\":" << short_num(s2w) << ",\"s2v\":" << short_num(s2v) << ",\"mult\":100}";
  return os.str();
}

std::string preset_config(const std::string& name) {
  std::string groups, grid, out;
  // Multiplicity 100 throughout; budgets per distinct subsystem are invariant
  // under scaling multiplicities and the grid together (the --scale flag).
  if (name == "case1") {
    groups = scalar_group("a099", 0.99, 1, 1, 1) + "," + scalar_group("a095", 0.95, 1, 1, 1) +
             "," + scalar_group("a090", 0.90, 1, 1, 1);
    grid = grid_json(0.0, 800.0, 25.0);
  } else if (name == "case2") {
    groups = scalar_group("s2w10", 0.95, 1, 10, 1) + "," + scalar_group("s2w3", 0.95, 1, 3, 1) +
             "," + scalar_group("s2w1", 0.95, 1, 1, 1);
    grid = grid_json(0.0, 800.0, 25.0);
  } else if (name == "case3") {
    groups = scalar_group("c1v01", 0.95, 1, 1, 0.1) + "," + scalar_group("c1v10", 0.95, 1, 1, 10) +
             "," + scalar_group("c025v10", 0.95, 0.25, 1, 10);
    grid = grid_json(0.0, 800.0, 25.0);
  } else if (name == "case4") {
    groups =
        "{\"label\":\"dim2\",\"A\":[[0.95,0.05],[0,0.95]],\"C\":[[1,0],[0,1]],"
        "\"Sw\":[[1,0],[0,1]],\"Sv\":[[1,0],[0,1]],\"mult\":100},"
        "{\"label\":\"dim1\",\"a\":0.95,\"c\":1,\"s2w\":1,\"s2v\":1,\"mult\":100}";
    grid = grid_json(0.0, 1600.0, 25.0);
  } else {
    fail(kExitValidation, "unknown preset " + name + " (expected case1..case4)");
  }
  out = "out/" + name;
  return "{\"system\":{\"groups\":[" + groups + "]},\"capacity\":{\"grid\":" + grid +
         ",\"unit\":\"nats\"},\"out\":{\"dir\":\"" + out + "\"}}";
}

int cmd_reproduce(const std::string& which, const Options& opts) {
  std::string json = preset_config(which);
  int rc = cmd_steady(opts, json);
  if (rc != kExitOk) return rc;
  return cmd_allocate(opts, json);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"capacity-constrained linear-Gaussian prediction toolkit"};
  app.require_subcommand(1);

  Options opts;
  std::string preset;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config)
      sub->add_option("--config", opts.config_path, "path to a JSON experiment config")
          ->required();
    sub->add_option("--scale", opts.scale,
                    "divide group multiplicities and finite capacity values by this factor")
        ->check(CLI::PositiveNumber);
    sub->add_option("--unit", opts.unit, "capacity unit of the grid (bits or nats)")
        ->check(CLI::IsMember({"bits", "nats"}));
    auto* seed_opt = sub->add_option("--seed", opts.seed, "override the simulation seed");
    sub->callback([&opts, seed_opt] { opts.seed_set = seed_opt->count() > 0; });
    sub->add_option("--out", opts.out_dir, "output directory (overrides the config)");
  };

  auto* steady = app.add_subcommand("steady", "stationary filter summaries per group");
  add_common(steady, true);
  auto* allocate = app.add_subcommand("allocate", "capacity sweep with budgets, cost and plots");
  add_common(allocate, true);
  auto* simulate = app.add_subcommand(
      "simulate", "Monte Carlo check of realized loss against the analytic curve");
  add_common(simulate, true);
  simulate->add_flag("--direct-predictor", opts.direct_predictor,
                     "use the oracle-access predictor instead of constructing the agent");
  auto* reproduce =
      app.add_subcommand("reproduce", "run a built-in experiment preset (case1..case4)");
  reproduce->add_option("preset", preset, "one of case1, case2, case3, case4")->required();
  add_common(reproduce, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (steady->parsed()) return cmd_steady(opts);
    if (allocate->parsed()) return cmd_allocate(opts);
    if (simulate->parsed()) return cmd_simulate(opts);
    if (reproduce->parsed()) return cmd_reproduce(preset, opts);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitValidation;
}
