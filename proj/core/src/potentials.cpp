#include "jostlab/potentials.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "jostlab/error.hpp"

namespace jostlab {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(out);
}

// Upper bound for E1(x), x > 0.
double exp_integral_e1_bound(double x) { return std::exp(-x) * std::log1p(1.0 / x); }

}  // namespace

Tabulated::Tabulated(std::vector<double> r, std::vector<double> v) {
  if (r.size() != v.size()) throw DomainError("tabulated potential: column length mismatch");
  if (r.size() < 2) throw DomainError("tabulated potential: need at least two samples");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || !std::isfinite(v[i])) {
      throw DomainError("tabulated potential: non-finite sample at row " + std::to_string(i + 1));
    }
    if (i > 0 && !(r[i] > r[i - 1])) {
      throw DomainError("tabulated potential: radii not strictly increasing at row " +
                        std::to_string(i + 1));
    }
  }
  if (r.front() < 0.0) throw DomainError("tabulated potential: negative radius");

  const std::size_t n = r.size();
  std::vector<double> secant(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) secant[i] = (v[i + 1] - v[i]) / (r[i + 1] - r[i]);
  std::vector<double> slope(n);
  slope.front() = secant.front();
  slope.back() = secant.back();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = r[i] - r[i - 1];
    const double h1 = r[i + 1] - r[i];
    if (secant[i - 1] * secant[i] <= 0.0) {
      slope[i] = 0.0;
    } else {
      const double w1 = 2.0 * h1 + h0;
      const double w2 = h1 + 2.0 * h0;
      slope[i] = (w1 + w2) / (w1 / secant[i - 1] + w2 / secant[i]);
    }
  }
  // Endpoint slopes must not overshoot either.
  if (n > 2) {
    if (slope.front() * secant.front() < 0.0) slope.front() = 0.0;
    if (slope.back() * secant.back() < 0.0) slope.back() = 0.0;
  }

  // First absolute moment is finite for any finite table; checked anyway.
  double moment = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    moment += 0.5 * (r[i + 1] - r[i]) * (r[i] * std::abs(v[i]) + r[i + 1] * std::abs(v[i + 1]));
  }
  if (!std::isfinite(moment)) throw DomainError("tabulated potential: first moment diverges");

  data_ = std::make_shared<const Data>(Data{std::move(r), std::move(v), std::move(slope)});
}

double Tabulated::operator()(double r) const {
  const auto& d = *data_;
  if (r <= d.r.front()) return d.v.front();
  if (r > d.r.back()) return 0.0;
  const auto it = std::upper_bound(d.r.begin(), d.r.end(), r);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - d.r.begin()) - 1,
                                              d.r.size() - 2);
  const double h = d.r[i + 1] - d.r[i];
  const double t = (r - d.r[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * d.v[i] + (t3 - 2 * t2 + t) * h * d.slope[i] +
         (-2 * t3 + 3 * t2) * d.v[i + 1] + (t3 - t2) * h * d.slope[i + 1];
}

PotentialSpec::PotentialSpec(PotentialKind kind, double scale)
    : kind_(std::move(kind)), scale_(scale) {
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw DomainError("potential: scale must be positive");
  std::visit(overloaded{
                 [](const SquareWell& p) {
                   if (!(p.radius > 0.0) || !std::isfinite(p.depth))
                     throw DomainError("square_well: need radius > 0 and finite depth");
                 },
                 [](const Exponential& p) {
                   if (!(p.range > 0.0) || !std::isfinite(p.strength))
                     throw DomainError("exponential: need range > 0 and finite strength");
                 },
                 [](const Gaussian& p) {
                   if (!(p.width > 0.0) || !std::isfinite(p.strength))
                     throw DomainError("gaussian: need width > 0 and finite strength");
                 },
                 [](const Yukawa& p) {
                   if (!(p.screening >= 0.0) || !std::isfinite(p.strength))
                     throw DomainError("yukawa: need screening >= 0 and finite strength");
                 },
                 [](const Tabulated&) {},
             },
             kind_);
}

std::string_view PotentialSpec::kind_name() const {
  return std::visit(overloaded{
                        [](const SquareWell&) { return std::string_view("square_well"); },
                        [](const Exponential&) { return std::string_view("exponential"); },
                        [](const Gaussian&) { return std::string_view("gaussian"); },
                        [](const Yukawa&) { return std::string_view("yukawa"); },
                        [](const Tabulated&) { return std::string_view("tabulated"); },
                    },
                    kind_);
}

double PotentialSpec::operator()(double r) const {
  if (!(r >= 0.0)) throw DomainError("potential: r must be non-negative");
  const double v = std::visit(
      overloaded{
          [r](const SquareWell& p) { return r < p.radius ? -p.depth : 0.0; },
          [r](const Exponential& p) { return p.strength * std::exp(-r / p.range); },
          [r](const Gaussian& p) {
            const double x = r / p.width;
            return p.strength * std::exp(-x * x);
          },
          [r](const Yukawa& p) {
            if (r == 0.0) throw DomainError("yukawa: evaluation at r = 0");
            return p.strength * std::exp(-p.screening * r) / r;
          },
          [r](const Tabulated& p) { return p(r); },
      },
      kind_);
  return scale_ * v;
}

bool PotentialSpec::is_zero() const {
  return std::visit(overloaded{
                        [](const SquareWell& p) { return p.depth == 0.0; },
                        [](const Exponential& p) { return p.strength == 0.0; },
                        [](const Gaussian& p) { return p.strength == 0.0; },
                        [](const Yukawa& p) { return p.strength == 0.0; },
                        [](const Tabulated& p) {
                          return std::all_of(p.values().begin(), p.values().end(),
                                             [](double v) { return v == 0.0; });
                        },
                    },
                    kind_);
}

double PotentialSpec::length_scale() const {
  return std::visit(overloaded{
                        [](const SquareWell& p) { return p.radius; },
                        [](const Exponential& p) { return p.range; },
                        [](const Gaussian& p) { return p.width; },
                        [](const Yukawa& p) { return p.screening > 0.0 ? 1.0 / p.screening : kInf; },
                        [](const Tabulated& p) { return p.radii().back(); },
                    },
                    kind_);
}

std::vector<double> PotentialSpec::breakpoints() const {
  if (const auto* w = std::get_if<SquareWell>(&kind_)) return {w->radius};
  if (const auto* t = std::get_if<Tabulated>(&kind_)) {
    std::vector<double> out;
    for (double r : t->radii())
      if (r > 0.0) out.push_back(r);
    return out;
  }
  return {};
}

double tail_bound(const PotentialSpec& spec, double R) {
  if (!(R > 0.0)) throw DomainError("tail_bound: R must be positive");
  const double s = spec.scale();
  return std::visit(
      overloaded{
          [&](const SquareWell& p) {
            if (R >= p.radius) return 0.0;
            return s * std::abs(p.depth) * ((p.radius - R) + 0.5 * (p.radius * p.radius - R * R));
          },
          [&](const Exponential& p) {
            return s * std::abs(p.strength) * p.range * std::exp(-R / p.range) * (1.0 + R + p.range);
          },
          [&](const Gaussian& p) {
            const double x = R / p.width;
            return s * std::abs(p.strength) *
                   (0.5 * p.width * std::sqrt(M_PI) * std::erfc(x) +
                    0.5 * p.width * p.width * std::exp(-x * x));
          },
          [&](const Yukawa& p) {
            if (p.screening == 0.0) return p.strength == 0.0 ? 0.0 : kInf;
            const double x = p.screening * R;
            return s * std::abs(p.strength) * (exp_integral_e1_bound(x) + std::exp(-x) / p.screening);
          },
          [&](const Tabulated& p) {
            // Piecewise rectangle bound: each cell contributes its overlap with
            // [R, inf) times the sampled maximum of |V|(1+r) on the cell.
            const auto& r = p.radii();
            double total = 0.0;
            auto cell = [&](double lo, double hi) {
              if (hi <= R) return;
              double peak = 0.0;
              constexpr int kSub = 16;
              for (int i = 0; i <= kSub; ++i) {
                const double x = lo + (hi - lo) * i / kSub;
                peak = std::max(peak, std::abs(p(x)) * (1.0 + x));
              }
              total += (hi - std::max(lo, R)) * peak;
            };
            if (r.front() > 0.0) cell(0.0, r.front());
            for (std::size_t i = 0; i + 1 < r.size(); ++i) cell(r[i], r[i + 1]);
            return s * total;
          },
      },
      spec.kind());
}

double choose_cutoff(const PotentialSpec& spec, double tol) {
  if (!(tol > 0.0)) throw DomainError("choose_cutoff: tol must be positive");
  const double length = spec.length_scale();
  if (!std::isfinite(length)) throw CutoffError("choose_cutoff: potential has no finite range");
  const double step = 0.25 * length;
  const double r_max = std::max(1000.0 * length, 100.0);
  for (long n = 1; n * step <= r_max * (1.0 + 1e-12); ++n) {
    const double R = n * step;
    if (tail_bound(spec, R) <= tol) return R;
  }
  throw CutoffError("choose_cutoff: tail above tol=" + std::to_string(tol) + " up to R=" +
                    std::to_string(r_max));
}

Tabulated parse_table(std::string_view csv_text) {
  std::vector<double> r, v;
  std::istringstream in{std::string(csv_text)};
  std::string line;
  int line_no = 0;
  bool seen_data = false;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    const auto comma = row.find(',');
    double rv = 0.0, vv = 0.0;
    const bool ok = comma != std::string_view::npos && parse_double(row.substr(0, comma), rv) &&
                    parse_double(row.substr(comma + 1), vv);
    if (!ok) {
      if (!seen_data && !header_skipped) {
        header_skipped = true;
        continue;
      }
      throw ParseError("expected two numeric columns 'r,V'", line_no);
    }
    seen_data = true;
    if (!r.empty() && !(rv > r.back())) throw ParseError("radii must be strictly increasing", line_no);
    r.push_back(rv);
    v.push_back(vv);
  }
  if (r.size() < 2) throw ParseError("tabulated potential needs at least two rows", 0);
  return Tabulated(std::move(r), std::move(v));
}

PotentialSpec parse_spec(std::string_view text, const std::filesystem::path& base_dir) {
  static const std::set<std::string, std::less<>> kKnown = {
      "kind", "depth", "radius", "strength", "range", "width", "screening", "scale", "file"};
  static const std::map<std::string, std::vector<std::string>, std::less<>> kRequired = {
      {"square_well", {"depth", "radius"}}, {"exponential", {"strength", "range"}},
      {"gaussian", {"strength", "width"}},  {"yukawa", {"strength", "screening"}},
      {"tabulated", {"file"}},
  };

  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry, std::less<>> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!kKnown.contains(key)) throw ParseError("unknown key: " + key, line_no);
    if (entries.contains(key)) throw ParseError("duplicate key: " + key, line_no);
    entries.emplace(key, Entry{value, line_no});
  }

  const auto kind_it = entries.find("kind");
  if (kind_it == entries.end()) throw ParseError("missing key: kind", 0);
  const std::string& kind = kind_it->second.value;
  const auto req = kRequired.find(kind);
  if (req == kRequired.end()) throw ParseError("unknown kind: " + kind, kind_it->second.line);
  for (const auto& [key, entry] : entries) {
    if (key == "kind" || key == "scale") continue;
    if (std::find(req->second.begin(), req->second.end(), key) == req->second.end()) {
      throw ParseError("key '" + key + "' does not apply to kind " + kind, entry.line);
    }
  }
  for (const auto& key : req->second) {
    if (!entries.contains(key)) throw ParseError("missing key: " + key, 0);
  }

  auto number = [&](const std::string& key) {
    const Entry& e = entries.at(key);
    double out = 0.0;
    if (!parse_double(e.value, out)) throw ParseError("non-numeric value for " + key, e.line);
    return out;
  };
  double scale = 1.0;
  if (entries.contains("scale")) scale = number("scale");

  try {
    if (kind == "square_well") return PotentialSpec(SquareWell{number("depth"), number("radius")}, scale);
    if (kind == "exponential") return PotentialSpec(Exponential{number("strength"), number("range")}, scale);
    if (kind == "gaussian") return PotentialSpec(Gaussian{number("strength"), number("width")}, scale);
    if (kind == "yukawa") return PotentialSpec(Yukawa{number("strength"), number("screening")}, scale);
    const Entry& file = entries.at("file");
    std::filesystem::path path(file.value);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    std::ifstream csv(path);
    if (!csv) throw ParseError("cannot open table file: " + path.string(), file.line);
    std::stringstream buffer;
    buffer << csv.rdbuf();
    try {
      return PotentialSpec(parse_table(buffer.str()), scale);
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ": " + e.what(), file.line);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const DomainError& e) {
    throw ParseError(e.what(), 0);
  }
}

PotentialSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open potential config: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_spec(buffer.str(), path.parent_path());
}

}  // namespace jostlab
