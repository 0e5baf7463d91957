#include "condgreedy/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <stdexcept>

#include "condgreedy/basis_spec.hpp"
#include "condgreedy/conditionality.hpp"
#include "condgreedy/detail/text.hpp"
#include "condgreedy/greedy.hpp"
#include "condgreedy/io.hpp"
#include "condgreedy/rng.hpp"

namespace condgreedy {

namespace {

using detail::format_sig;

std::string num(double x) { return format_sig(x, 6); }

CheckResult verdict(std::string id, bool ok, std::string detail) {
  return {std::move(id), ok ? Verdict::Pass : Verdict::Fail, std::move(detail)};
}

struct Context {
  const Scenario& s;
  const std::optional<BasisTruncation>& basis;
  const std::vector<LadderEntry>& ladder;
  const std::optional<GrowthReport>& growth;

  const BasisTruncation& B() const {
    if (!basis) throw std::invalid_argument("check needs a basis but scenario '" + s.name + "' has none");
    return *basis;
  }
};

/// Block structure of a blocksum/pqsplit spec.
struct BlockLayout {
  std::string kind;
  std::string base;  ///< base spec with an explicit size
  std::vector<Index> dims;
  std::vector<Index> offsets;
};

std::optional<BlockLayout> block_layout(const std::string& spec) {
  const SpecCall c = split_spec(spec);
  if (c.name != "blocksum" && c.name != "pqsplit") return std::nullopt;
  BlockLayout out{c.name, c.args.at(0), {}, {}};
  for (std::size_t i = 1; i < c.args.size(); ++i) {
    const std::string_view arg = detail::trim(c.args[i]);
    if (arg.rfind("dims=", 0) != 0) continue;
    std::string_view dims = arg.substr(5);
    if (dims.size() >= 2 && dims.front() == '[') dims = dims.substr(1, dims.size() - 2);
    out.dims = parse_range(dims);
  }
  const Index top = *std::max_element(out.dims.begin(), out.dims.end());
  if (out.base.find_first_of(":(") == std::string::npos) out.base += ":" + std::to_string(top);
  Index offset = 0;
  for (Index d : out.dims) {
    out.offsets.push_back(offset);
    offset += d;
  }
  return out;
}

std::vector<Index> identity_shift(Index n, Index offset) {
  std::vector<Index> map(static_cast<std::size_t>(n));
  std::iota(map.begin(), map.end(), offset);
  return map;
}

/// Oracle within the guard, template search beyond.
Estimate best_known(const BasisTruncation& b, Index m, const Scenario& s) {
  if (m <= SearchOptions{}.oracle_guard) return L_m_oracle(b, m);
  return L_m_estimate(b, m, s.budget, s.seed);
}

/// C4 = C2 C3 D^2 / (D - 1) and the index inequality m <= C4 d_r for every
/// m from d_1 to sum d_n, where sum_{n<=r} d_n <= m < sum_{n<=r+1} d_n.
CheckResult index_chain(const std::string& id, const std::vector<Index>& dims, double c2, double c3) {
  double D = 1.0;
  for (std::size_t n = 1; n < dims.size(); ++n)
    D = std::max(D, static_cast<double>(dims[n]) / static_cast<double>(dims[n - 1]));
  if (D <= 1.0) return verdict(id, false, "block dims must grow");
  const double c4 = c2 * c3 * D * D / (D - 1.0);
  const Index total = std::accumulate(dims.begin(), dims.end(), Index{0});
  Index worst_m = 0;
  double worst = 0.0;
  for (Index m = dims.front(); m <= total; ++m) {
    Index cum = 0;
    std::size_t r = 0;
    while (r < dims.size() && cum + dims[r] <= m) cum += dims[r++];
    const double ratio = static_cast<double>(m) / static_cast<double>(dims[r - 1]);
    if (ratio > worst) {
      worst = ratio;
      worst_m = m;
    }
  }
  return verdict(id, worst <= c4 + 1e-12,
                 "D=" + num(D) + " C4=" + num(c4) + " max m/d_r=" + num(worst) + " at m=" + std::to_string(worst_m) +
                     " over m=" + std::to_string(dims.front()) + ".." + std::to_string(total));
}

using CheckFn = std::function<std::vector<CheckResult>(const Context&)>;

std::vector<CheckResult> check_fit(const Context& c) {
  if (!c.growth) return {verdict("fit", false, "fewer than four ladder rungs")};
  const auto& g = *c.growth;
  std::string d = "target=" + g.target.to_string() + " slope=" + num(g.slope) + " R^2=" +
                  (g.r2 ? num(*g.r2) : std::string("undefined"));
  if (!g.note.empty()) d += " (" + g.note + ")";
  return {verdict("fit", g.pass, d)};
}

std::vector<CheckResult> check_monotone(const Context& c) {
  for (std::size_t i = 1; i < c.ladder.size(); ++i)
    if (c.ladder[i].row.lb < c.ladder[i - 1].row.lb)
      return {verdict("monotone", false,
                      "LB drops from m=" + std::to_string(c.ladder[i - 1].row.m) + " to m=" + std::to_string(c.ladder[i].row.m))};
  return {verdict("monotone", true, "LB_m non-decreasing over " + std::to_string(c.ladder.size()) + " rungs")};
}

std::vector<CheckResult> check_lower_line(const Context& c, const std::string& id, double slope, double shift) {
  std::string bad;
  for (const auto& e : c.ladder) {
    const double need = slope * static_cast<double>(e.row.m) + shift;
    if (e.row.lb < need - 1e-9) bad += (bad.empty() ? "" : ", ") + std::to_string(e.row.m);
  }
  return {verdict(id, bad.empty(), bad.empty() ? "all rungs satisfy the bound" : "violated at m=" + bad)};
}

std::vector<CheckResult> check_unit_control(const Context& c) {
  std::vector<CheckResult> out;
  const Index top = c.s.ladder.empty() ? 16 : c.s.ladder.back();
  for (const char* p : {"lp:1", "lp:2", "lp:inf"}) {
    const BasisTruncation b = unit_vector_system(top, parse_space(p));
    double worst = 0.0;
    for (Index m : c.s.ladder) worst = std::max(worst, std::abs(L_m_oracle(b, m).value - 1.0));
    out.push_back(verdict(std::string("unit-control ") + p, worst <= 1e-9, "max |LB_m - 1| = " + num(worst)));
  }
  return out;
}

std::vector<CheckResult> check_template_oracle(const Context& c) {
  std::string bad;
  double worst = 0.0;
  for (const auto& e : c.ladder) {
    if (e.row.m > SearchOptions{}.oracle_guard) continue;
    const double oracle = L_m_oracle(c.B(), e.row.m).value;
    const double tmpl = L_m_estimate(c.B(), e.row.m, 0, c.s.seed).value;
    worst = std::max(worst, std::abs(oracle - tmpl));
    if (std::abs(oracle - tmpl) > 1e-9) bad += (bad.empty() ? "" : ", ") + std::to_string(e.row.m);
  }
  return {verdict("template-matches-oracle", bad.empty(),
                  bad.empty() ? "max |template - oracle| = " + num(worst) : "mismatch at m=" + bad)};
}

std::vector<CheckResult> check_ratio_64_8(const Context& c) {
  const LadderEntry *e8 = nullptr, *e64 = nullptr;
  for (const auto& e : c.ladder) {
    if (e.row.m == 8) e8 = &e;
    if (e.row.m == 64) e64 = &e;
  }
  if (!e8 || !e64) return {verdict("ratio-64-8", false, "ladder lacks m=8 or m=64")};
  const double r = e64->row.lb / e8->row.lb;
  return {verdict("ratio-64-8", r <= 4.0, "LB_64/LB_8 = " + num(r) + " (bound 4)")};
}

std::vector<CheckResult> check_phi(const Context& c) {
  const BasisTruncation b = truncate(c.B(), std::min<Index>(c.B().size(), kExactSetGuard));
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  const Index top = std::min<Index>(12, b.size());
  for (Index m = 1; m <= top; ++m) {
    const double r = fundamental_function(b, m, PhiMode::Exact) / static_cast<double>(m);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {verdict("phi-linear", lo >= 0.5 && hi <= 2.0,
                  "phi_m/m in [" + num(lo) + ", " + num(hi) + "] for m=1.." + std::to_string(top) + " (exact, d=" +
                      std::to_string(b.size()) + ")")};
}

std::vector<CheckResult> check_interleave(const Context& c) {
  const SpecCall call = split_spec(c.s.basis);
  if (call.name != "interleave" || call.args.size() != 2)
    return {verdict("interleave-transfer", false, "basis is not interleave(a,b)")};
  const BasisTruncation b0 = load_basis(call.args[0]);
  const BasisTruncation b1 = load_basis(call.args[1]);
  const BasisTruncation& inter = c.B();
  std::vector<Index> map0;
  for (Index j = 0, k = 0; j < std::max(b0.size(), b1.size()); ++j) {
    if (j < b0.size()) map0.push_back(k++);
    if (j < b1.size()) ++k;
  }
  const Index top = std::min<Index>(b0.size(), 8);
  double worst = 0.0;
  std::string low;
  for (Index m = 1; m <= top; ++m) {
    const Estimate e = L_m_oracle(b0, m);
    const Witness t = remap(e.witness, map0, inter.size());
    const double r = recompute_ratio(inter, t);
    worst = std::max(worst, std::abs(r - e.value) / std::max(1.0, e.value));
    const Index m2 = std::min<Index>(2 * m, inter.size());
    TemplateSet ts;
    ts.seeds.push_back(t);
    const double lb2 = L_m_estimate(inter, m2, c.s.budget, c.s.seed, ts).value;
    if (lb2 < e.value - 1e-12) low += (low.empty() ? "" : ", ") + std::to_string(m);
  }
  return {verdict("interleave-transfer", worst <= 1e-12,
                  "max relative ratio change " + num(worst) + " over m=1.." + std::to_string(top)),
          verdict("interleave-doubling", low.empty(),
                  low.empty() ? "LB_2m[interleave] >= LB_m for m=1.." + std::to_string(top) : "fails at m=" + low)};
}

std::vector<CheckResult> check_blocksum_index(const Context& c) {
  const auto layout = block_layout(c.s.basis);
  if (!layout) return {verdict("blocksum-index", false, "basis is not a block sum")};
  return {index_chain("blocksum-index", layout->dims, 1.0, 1.0)};
}

std::vector<CheckResult> check_blocksum_embed(const Context& c) {
  const auto layout = block_layout(c.s.basis);
  if (!layout) return {verdict("blocksum-embed", false, "basis is not a block sum")};
  const BasisTruncation base = load_basis(layout->base);
  double worst = 0.0;
  for (std::size_t n = 0; n < layout->dims.size(); ++n) {
    const BasisTruncation part = truncate(base, layout->dims[n]);
    const Estimate e = L_m_oracle(part, std::min<Index>(part.size(), 8));
    const Witness t = remap(e.witness, identity_shift(part.size(), layout->offsets[n]), c.B().size());
    worst = std::max(worst, std::abs(recompute_ratio(c.B(), t) - e.value) / std::max(1.0, e.value));
  }
  return {verdict("blocksum-embed", worst <= 1e-12,
                  "max relative ratio change " + num(worst) + " over " + std::to_string(layout->dims.size()) + " blocks")};
}

std::vector<CheckResult> check_blocksum_qg(const Context& c) {
  const auto layout = block_layout(c.s.basis);
  if (!layout) return {verdict("blocksum-qg", false, "basis is not a block sum")};
  const Index d = std::min<Index>(64, c.B().size());
  const BasisTruncation base = load_basis(layout->base);
  if (base.size() < d) return {verdict("blocksum-qg", false, "base family shorter than " + std::to_string(d))};
  const double sum_qg = quasi_greedy_constant_lb(truncate(c.B(), d), c.s.budget, c.s.seed).value;
  const double base_qg = quasi_greedy_constant_lb(truncate(base, d), c.s.budget, c.s.seed).value;
  return {verdict("blocksum-qg", sum_qg <= 1.1 * base_qg,
                  "quasi-greedy LB at d=" + std::to_string(d) + ": block sum " + num(sum_qg) + ", base " + num(base_qg) +
                      " (bound 1.1x)")};
}

std::vector<CheckResult> check_pq_distortion(const Context& c) {
  const auto layout = block_layout(c.s.basis);
  if (!layout || layout->kind != "pqsplit") return {verdict("pq-distortion", false, "basis is not a pqsplit")};
  const BasisTruncation base = load_basis(layout->base);
  double up = 0.0, down = 0.0;
  const std::uint64_t samples = 1000;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const std::size_t n = i % layout->dims.size();
    const BasisTruncation part = truncate(base, layout->dims[n]);
    const BlockMapPair maps = half_split_maps(part.ambient_dim(), SpaceDesc::lp(1));
    CounterRng rng(c.s.seed, {static_cast<std::uint64_t>(Stream::Scenario), 1, i});
    Eigen::VectorXd x(part.ambient_dim());
    for (Index r = 0; r < x.size(); ++r) x[r] = 2.0 * rng.uniform() - 1.0;
    const double nx = part.norm_of(x);
    if (nx == 0.0) continue;
    const double ny = std::max(maps.P.rows() ? norm(maps.target_Y, maps.P * x) : 0.0,
                               maps.Q.rows() ? norm(maps.target_Z, maps.Q * x) : 0.0);
    up = std::max(up, nx / ny);
    down = std::max(down, ny / nx);
  }
  const double distortion = up * down;
  return {verdict("pq-distortion", distortion <= 2.0 + 1e-12,
                  "max ||x||/||(Px,Qx)|| = " + num(up) + ", max ||(Px,Qx)||/||x|| = " + num(down) +
                      ", distortion " + num(distortion) + " (bound 2) on " + std::to_string(samples) + " vectors")};
}

double l1_operator_norm(const Eigen::MatrixXd& m) {
  return m.size() ? m.cwiseAbs().colwise().sum().maxCoeff() : 0.0;
}

std::vector<CheckResult> check_pq_chain(const Context& c) {
  const auto layout = block_layout(c.s.basis);
  if (!layout || layout->kind != "pqsplit") return {verdict("pq-constant-chain", false, "basis is not a pqsplit")};
  const BasisTruncation base = load_basis(layout->base);
  double c2 = 0.0, c3 = 0.0;
  for (Index d : layout->dims) {
    const BlockMapPair maps = half_split_maps(truncate(base, d).ambient_dim(), SpaceDesc::lp(1));
    c2 = std::max(c2, l1_operator_norm(maps.P));
    c3 = std::max(c3, l1_operator_norm(maps.Q));
  }
  auto r = index_chain("pq-constant-chain", layout->dims, c2, c3);
  r.detail = "C2=" + num(c2) + " C3=" + num(c3) + " " + r.detail;
  return {r};
}

std::vector<CheckResult> check_pq_embed(const Context& c) {
  const auto layout = block_layout(c.s.basis);
  if (!layout || layout->kind != "pqsplit") return {verdict("pq-embed", false, "basis is not a pqsplit")};
  const BasisTruncation base = load_basis(layout->base);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t n = 0; n < layout->dims.size(); ++n) {
    const BasisTruncation part = truncate(base, layout->dims[n]);
    const Estimate e = L_m_oracle(part, std::min<Index>(part.size(), 8));
    const Witness t = remap(e.witness, identity_shift(part.size(), layout->offsets[n]), c.B().size());
    const double q = recompute_ratio(c.B(), t) / e.value;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  return {verdict("pq-embed", lo >= 0.5 - 1e-12 && hi <= 2.0 + 1e-12,
                  "embedded/original witness ratio in [" + num(lo) + ", " + num(hi) + "] (allowed [0.5, 2])")};
}

std::vector<CheckResult> check_pq_product(const Context&) {
  std::string detail;
  bool ok = true;
  for (Index n = 2; n <= 6; ++n) {
    const BlockMapPair maps = canonical_product_projections(n);
    const Index total = maps.P.cols();
    const Eigen::MatrixXd id = maps.P.transpose() * maps.P + maps.Q.transpose() * maps.Q;
    ok = ok && id.isApprox(Eigen::MatrixXd::Identity(total, total));
    const BasisTruncation sum = pq_block_sum(unit_vector_system(total, SpaceDesc::lp(2)), {{total, maps}}, 1.0, 2.0);
    ok = ok && sum.size() == total;
  }
  detail = "l_inf^n (+) l_2^(2^n-n-2) projections complementary and pq sums constructible for n=2..6";
  return {verdict("pq-product-maps", ok, detail)};
}

struct LorentzStats {
  double identity = 0.0, lift_bv = 0.0, lift_sup = 0.0, retract_l1 = 0.0, retract_sup = 0.0;
};

LorentzStats lorentz_stats(std::uint64_t seed) {
  LorentzStats s;
  const SpaceDesc l1 = SpaceDesc::lp(1), sup = SpaceDesc::lp_inf(), bv = SpaceDesc::bv();
  for (std::uint64_t i = 0; i < 1000; ++i) {
    CounterRng rng(seed, {static_cast<std::uint64_t>(Stream::Scenario), 2, i});
    // even length, so R pairs every entry without an implicit trailing zero
    const Index n = 2 * (1 + static_cast<Index>(rng.below(32)));
    Eigen::VectorXd f(n);
    for (Index j = 0; j < n; ++j) f[j] = 2.0 * rng.uniform() - 1.0;
    const Eigen::VectorXd lf = lorentz_lift(f);
    s.identity = std::max(s.identity, (lorentz_retract(lf) - f).cwiseAbs().maxCoeff());
    s.lift_bv = std::max(s.lift_bv, norm(bv, lf) / norm(l1, f));
    s.lift_sup = std::max(s.lift_sup, norm(sup, lf) / norm(sup, f));
    s.retract_l1 = std::max(s.retract_l1, norm(l1, lorentz_retract(f)) - norm(bv, f));
    s.retract_sup = std::max(s.retract_sup, norm(sup, lorentz_retract(f)) - 2.0 * norm(sup, f));
  }
  return s;
}

std::vector<CheckResult> check_lorentz(const Context& c) {
  const LorentzStats s = lorentz_stats(c.s.seed);
  return {
      verdict("lorentz-identity", s.identity == 0.0, "max |R(L f) - f| = " + num(s.identity)),
      verdict("lorentz-lift-bv", s.lift_bv <= 1.0 + 1e-12, "max ||L f||_BV / ||f||_1 = " + num(s.lift_bv) + " (bound 1)"),
      verdict("lorentz-lift-bv-sharp", s.lift_bv <= 2.0 + 1e-12,
              "max ||L f||_BV / ||f||_1 = " + num(s.lift_bv) + " (bound 2)"),
      verdict("lorentz-lift-sup", s.lift_sup <= 1.0, "max ||L f||_inf / ||f||_inf = " + num(s.lift_sup)),
      verdict("lorentz-retract-l1", s.retract_l1 <= 1e-12, "max ||R f||_1 - ||f||_BV = " + num(s.retract_l1)),
      verdict("lorentz-retract-sup", s.retract_sup <= 1e-12, "max ||R f||_inf - 2||f||_inf = " + num(s.retract_sup)),
  };
}

const std::map<std::string, CheckFn>& registry() {
  static const std::map<std::string, CheckFn> r{
      {"fit", check_fit},
      {"monotone", check_monotone},
      {"unit-control", check_unit_control},
      {"lb-ge-m-minus-1", [](const Context& c) { return check_lower_line(c, "lb-ge-m-minus-1", 1.0, -1.0); }},
      {"lb-ge-quarter-m", [](const Context& c) { return check_lower_line(c, "lb-ge-quarter-m", 0.25, 0.0); }},
      {"template-matches-oracle", check_template_oracle},
      {"ratio-64-8", check_ratio_64_8},
      {"phi-linear", check_phi},
      {"interleave-transfer", check_interleave},
      {"blocksum-index", check_blocksum_index},
      {"blocksum-embed", check_blocksum_embed},
      {"blocksum-qg", check_blocksum_qg},
      {"pq-distortion", check_pq_distortion},
      {"pq-constant-chain", check_pq_chain},
      {"pq-embed", check_pq_embed},
      {"pq-product-maps", check_pq_product},
      {"lorentz", check_lorentz},
  };
  return r;
}

/// Embedded block estimates that fit inside the first m positions.
std::vector<Witness> block_seeds(const BlockLayout& layout, const BasisTruncation& sum, Index m, const Scenario& s) {
  std::vector<Witness> seeds;
  const BasisTruncation base = load_basis(layout.base);
  for (std::size_t n = 0; n < layout.dims.size(); ++n) {
    const Index k = std::min(layout.dims[n], m - layout.offsets[n]);
    if (k < 1) break;
    const BasisTruncation part = truncate(base, layout.dims[n]);
    seeds.push_back(remap(best_known(part, k, s).witness, identity_shift(part.size(), layout.offsets[n]), sum.size()));
  }
  return seeds;
}

std::uint64_t parse_count(const std::string& v) {
  const long long n = detail::parse_int(v);
  if (n < 0) throw std::invalid_argument("budget must be non-negative, got " + v);
  return static_cast<std::uint64_t>(n);
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("expected true or false, got '" + v + "'");
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Info: return "INFO";
  }
  return "FAIL";
}

std::vector<Scenario> builtin_scenarios() {
  using G = GrowthTarget;
  return {
      {"unit-control", "unit(16,lp:2)", {2, 4, 8, 16}, G::linear(), {"unit-control"}, 32, kDefaultSeed, true},
      {"difference-linear", "difference:10", parse_range("2..10"), G::linear(),
       {"lb-ge-m-minus-1", "template-matches-oracle", "monotone", "fit"}, 32, kDefaultSeed, true},
      {"summing-linear", "summing:10", parse_range("2..10"), G::linear(), {"lb-ge-quarter-m", "monotone", "fit"}, 32,
       kDefaultSeed, true},
      {"lindenstrauss-log", "lindenstrauss:64", {4, 8, 16, 32, 64}, G::log(),
       {"fit", "ratio-64-8", "phi-linear", "monotone"}, 8, kDefaultSeed, true},
      {"interleave-transfer", "interleave(difference:8,unit(8,lp:2))", {2, 4, 8, 16}, G::linear(),
       {"interleave-transfer", "monotone", "fit"}, 8, kDefaultSeed, true},
      {"blocksum-L1", "blocksum(lindenstrauss,dims=2^1..2^6,p=1)", {2, 4, 8, 16, 32, 64}, G::log(),
       {"blocksum-index", "blocksum-embed", "blocksum-qg", "phi-linear", "monotone", "fit"}, 16, kDefaultSeed, true},
      {"pq-split", "pqsplit(difference,dims=2^1..2^5,p=1,q=1)", {2, 4, 8, 16, 32}, G::linear(),
       {"pq-distortion", "pq-constant-chain", "pq-embed", "pq-product-maps", "monotone"}, 8, kDefaultSeed, true},
      {"lorentz-embed", "", {}, G::linear(), {"lorentz"}, 1, kDefaultSeed, false},
  };
}

Scenario builtin_scenario(const std::string& name) {
  for (auto& s : builtin_scenarios())
    if (s.name == name) return s;
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

std::vector<std::string> known_checks() {
  std::vector<std::string> out;
  for (const auto& [id, fn] : registry()) out.push_back(id);
  return out;
}

std::uint64_t parse_seed(const std::string& text) {
  const std::string t(detail::trim(text));
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    if (t.empty() || t[0] == '-') throw std::invalid_argument(t);
    v = std::stoull(t, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size()) throw std::invalid_argument("bad seed '" + t + "'");
  return v;
}

Scenario load_scenario(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string_view t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("scenario config line " + std::to_string(lineno) + ": expected key = value");
    kv[std::string(detail::trim(t.substr(0, eq)))] = std::string(detail::trim(t.substr(eq + 1)));
  }
  if (!kv.count("name")) throw std::invalid_argument("scenario config needs a name");
  Scenario s;
  s.name = kv["name"];
  for (const auto& b : builtin_scenarios())
    if (b.name == s.name) s = b;
  for (const auto& [key, value] : kv) {
    if (key == "name") continue;
    if (key == "basis") s.basis = value;
    else if (key == "ladder") s.ladder = value.empty() ? std::vector<Index>{} : parse_range(value);
    else if (key == "target") s.target = GrowthTarget::parse(value);
    else if (key == "budget") s.budget = parse_count(value);
    else if (key == "seed") s.seed = parse_seed(value);
    else if (key == "oracle") s.oracle = parse_bool(value);
    else if (key == "checks") {
      s.checks.clear();
      for (const auto& c : detail::split_top_level(value, ',')) s.checks.emplace_back(detail::trim(c));
    } else {
      throw std::invalid_argument("unknown scenario key '" + key + "'");
    }
  }
  for (const auto& c : s.checks)
    if (!registry().count(c)) throw std::invalid_argument("unknown check '" + c + "'");
  return s;
}

ScenarioReport run(const Scenario& scenario) {
  for (const auto& c : scenario.checks)
    if (!registry().count(c)) throw std::invalid_argument("unknown check '" + c + "'");
  for (std::size_t i = 1; i < scenario.ladder.size(); ++i)
    if (scenario.ladder[i] <= scenario.ladder[i - 1]) throw std::invalid_argument("scenario ladder must increase");

  ScenarioReport rep;
  rep.scenario = scenario;
  std::optional<BasisTruncation> basis;
  if (!scenario.basis.empty()) basis = load_basis(scenario.basis);
  if (!scenario.ladder.empty() && !basis) throw std::invalid_argument("a ladder needs a basis");

  if (basis) {
    const auto layout = block_layout(scenario.basis);
    const SearchOptions opts;
    std::optional<Witness> previous;
    for (Index m : scenario.ladder) {
      if (m < 1 || m > basis->size())
        throw std::invalid_argument("ladder rung " + std::to_string(m) + " outside the basis size " +
                                    std::to_string(basis->size()));
      Estimate e;
      if (scenario.oracle && m <= opts.oracle_guard) {
        e = L_m_oracle(*basis, m, opts);
      } else {
        TemplateSet ts;
        if (previous) ts.seeds.push_back(*previous);
        if (layout)
          for (auto& w : block_seeds(*layout, *basis, m, scenario)) ts.seeds.push_back(std::move(w));
        e = L_m_estimate(*basis, m, scenario.budget, scenario.seed, ts, opts);
      }
      // a witness for a smaller rung is admissible here too
      if (previous && previous->ratio > e.value) e = {previous->ratio, *previous};
      rep.ladder.push_back({{m, e.value, e.witness.method}, e.witness});
      previous = e.witness;
    }
    if (rep.ladder.size() >= 4) {
      std::vector<LadderRow> rows;
      for (const auto& e : rep.ladder) rows.push_back(e.row);
      rep.growth = growth_fit(rows, scenario.target);
    }
  }

  const Context ctx{scenario, basis, rep.ladder, rep.growth};
  for (const auto& id : scenario.checks)
    for (auto& r : registry().at(id)(ctx)) rep.checks.push_back(std::move(r));
  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(),
                         [](const CheckResult& r) { return r.verdict != Verdict::Fail; });
  return rep;
}

}  // namespace condgreedy
