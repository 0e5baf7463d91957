#include "condgreedy/spaces.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "condgreedy/detail/text.hpp"

namespace condgreedy {

namespace detail {

std::string format_double(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_sig(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::vector<std::string> split_top_level(std::string_view text, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (depth < 0) throw std::invalid_argument("unbalanced brackets in '" + std::string(text) + "'");
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (depth != 0) throw std::invalid_argument("unbalanced brackets in '" + std::string(text) + "'");
  out.push_back(cur);
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s) {
  s = trim(s);
  std::string str(s);
  if (str.empty()) throw std::invalid_argument("expected a number, got ''");
  char* end = nullptr;
  double v = std::strtod(str.c_str(), &end);
  if (end != str.c_str() + str.size() || std::isnan(v))
    throw std::invalid_argument("expected a number, got '" + str + "'");
  return v;
}

long long parse_int(std::string_view s) {
  s = trim(s);
  std::string str(s);
  if (str.empty()) throw std::invalid_argument("expected an integer, got ''");
  char* end = nullptr;
  long long v = std::strtoll(str.c_str(), &end, 10);
  if (end != str.c_str() + str.size()) throw std::invalid_argument("expected an integer, got '" + str + "'");
  return v;
}

}  // namespace detail

Exponent Exponent::finite(double p) {
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("exponent must be finite and >= 1");
  Exponent e;
  e.sup_ = false;
  e.p_ = p;
  return e;
}

double Exponent::value() const {
  if (sup_) throw std::logic_error("symbolic sup exponent has no numeric value");
  return p_;
}

namespace {

void validate(const SpaceDesc::Variant& v) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, C0Trunc>) {
          if (s.dim < 1) throw std::invalid_argument("c0 truncation needs dim >= 1");
        } else if constexpr (std::is_same_v<T, MixedSum>) {
          if (s.blocks.empty()) throw std::invalid_argument("mixed sum needs at least one block");
          for (const auto& b : s.blocks) {
            if (!b.space) throw std::invalid_argument("mixed sum block without a space");
            if (b.dim < 1) throw std::invalid_argument("mixed sum block dims must be positive");
            if (auto fd = b.space->fixed_dim(); fd && *fd != b.dim)
              throw std::invalid_argument("mixed sum block dim disagrees with block space");
            if (auto md = b.space->max_dim(); md && *md < b.dim)
              throw std::invalid_argument("mixed sum block dim exceeds block space capacity");
          }
        } else if constexpr (std::is_same_v<T, Lorentz>) {
          if (!(s.q >= 1.0) || std::isinf(s.q)) throw std::invalid_argument("Lorentz q must lie in [1, inf)");
          if (const auto* pq = std::get_if<LorentzPQ>(&s.weights)) {
            if (!(pq->p >= 1.0) || std::isinf(pq->p))
              throw std::invalid_argument("Lorentz preset p must lie in [1, inf)");
            if (pq->q != s.q) throw std::invalid_argument("Lorentz preset q must match the space q");
          } else {
            for (double w : std::get<std::vector<double>>(s.weights))
              if (!(w > 0.0) || std::isinf(w)) throw std::invalid_argument("Lorentz weights must be positive");
          }
        }
      },
      v);
}

double lp_norm(const Exponent& p, const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() == 0) return 0.0;
  if (p.is_sup()) return v.cwiseAbs().maxCoeff();
  const double e = p.value();
  if (e == 1.0) return v.cwiseAbs().sum();
  if (e == 2.0) return v.norm();
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]) / scale, e);
  return scale * std::pow(acc, 1.0 / e);
}

double lorentz_weight(const Lorentz& s, Index n) {  // n is 1-based
  if (const auto* pq = std::get_if<LorentzPQ>(&s.weights))
    return pq->q == pq->p ? 1.0 : std::pow(static_cast<double>(n), pq->q / pq->p - 1.0);
  return std::get<std::vector<double>>(s.weights)[static_cast<std::size_t>(n - 1)];
}

}  // namespace

SpaceDesc::SpaceDesc(Variant v) : v_(std::move(v)) { validate(v_); }

SpaceDesc SpaceDesc::mixed(Exponent outer, std::vector<std::pair<SpaceDesc, Index>> blocks) {
  MixedSum ms{outer, {}};
  ms.blocks.reserve(blocks.size());
  for (auto& [s, d] : blocks) ms.blocks.push_back({std::make_shared<const SpaceDesc>(std::move(s)), d});
  return SpaceDesc{std::move(ms)};
}

std::optional<Index> SpaceDesc::fixed_dim() const {
  if (const auto* c = get_if<C0Trunc>()) return c->dim;
  if (const auto* m = get_if<MixedSum>()) {
    Index total = 0;
    for (const auto& b : m->blocks) total += b.dim;
    return total;
  }
  return std::nullopt;
}

std::optional<Index> SpaceDesc::max_dim() const {
  if (auto fd = fixed_dim()) return fd;
  if (const auto* l = get_if<Lorentz>())
    if (const auto* w = std::get_if<std::vector<double>>(&l->weights)) return static_cast<Index>(w->size());
  return std::nullopt;
}

bool SpaceDesc::is_lattice() const {
  if (get_if<BV>()) return false;
  if (const auto* m = get_if<MixedSum>())
    return std::all_of(m->blocks.begin(), m->blocks.end(), [](const MixedBlock& b) { return b.space->is_lattice(); });
  return true;
}

void check_dim(const SpaceDesc& space, Index dim) {
  if (auto fd = space.fixed_dim(); fd && *fd != dim)
    throw std::invalid_argument("dimension mismatch: space " + to_string(space) + " has dim " +
                                std::to_string(*fd) + ", vector has " + std::to_string(dim));
  if (auto md = space.max_dim(); md && *md < dim)
    throw std::invalid_argument("dimension mismatch: Lorentz weight list shorter than vector (" +
                                std::to_string(*md) + " < " + std::to_string(dim) + ")");
}

double norm(const SpaceDesc& space, const Eigen::Ref<const Eigen::VectorXd>& v) {
  check_dim(space, v.size());
  if (v.hasNaN()) throw std::invalid_argument("vector has NaN entries");
  return norm_unchecked(space, v);
}

double norm_unchecked(const SpaceDesc& space, const Eigen::Ref<const Eigen::VectorXd>& v) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Lp>) {
          return lp_norm(s.p, v);
        } else if constexpr (std::is_same_v<T, C0Trunc>) {
          return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
        } else if constexpr (std::is_same_v<T, MixedSum>) {
          Eigen::VectorXd block_norms(static_cast<Index>(s.blocks.size()));
          Index offset = 0;
          for (std::size_t b = 0; b < s.blocks.size(); ++b) {
            block_norms[static_cast<Index>(b)] =
                norm_unchecked(*s.blocks[b].space, v.segment(offset, s.blocks[b].dim));
            offset += s.blocks[b].dim;
          }
          return lp_norm(s.outer, block_norms);
        } else if constexpr (std::is_same_v<T, Lorentz>) {
          const Eigen::VectorXd a = nonincreasing_rearrangement(v);
          double acc = 0.0;
          for (Index n = 0; n < a.size() && a[n] > 0.0; ++n) acc += std::pow(a[n], s.q) * lorentz_weight(s, n + 1);
          return std::pow(acc, 1.0 / s.q);
        } else {
          if (v.size() == 0) return 0.0;
          double acc = std::abs(v[0]);
          for (Index j = 1; j < v.size(); ++j) acc += std::abs(v[j] - v[j - 1]);
          return acc;
        }
      },
      space.variant());
}

SpaceDesc restrict_rows(const SpaceDesc& space, Index ambient_dim, const std::vector<Index>& rows) {
  if (!space.is_lattice()) throw std::invalid_argument("row restriction needs a lattice norm");
  if (rows.empty()) throw std::invalid_argument("row restriction needs at least one row");
  if (const auto* c = space.get_if<C0Trunc>()) {
    (void)c;
    return SpaceDesc::c0(static_cast<Index>(rows.size()));
  }
  if (const auto* m = space.get_if<MixedSum>()) {
    std::vector<std::pair<SpaceDesc, Index>> blocks;
    Index offset = 0;
    auto it = rows.begin();
    for (const auto& b : m->blocks) {
      std::vector<Index> local;
      while (it != rows.end() && *it < offset + b.dim) local.push_back(*it++ - offset);
      if (!local.empty()) {
        blocks.emplace_back(restrict_rows(*b.space, b.dim, local), static_cast<Index>(local.size()));
      }
      offset += b.dim;
    }
    return SpaceDesc::mixed(m->outer, std::move(blocks));
  }
  (void)ambient_dim;
  return space;
}

std::string to_string(const SpaceDesc& space) {
  using detail::format_double;
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Lp>) {
          return s.p.is_sup() ? "lp:inf" : "lp:" + format_double(s.p.value());
        } else if constexpr (std::is_same_v<T, C0Trunc>) {
          return "c0:" + std::to_string(s.dim);
        } else if constexpr (std::is_same_v<T, MixedSum>) {
          std::string out = "mixed:q=" + (s.outer.is_sup() ? std::string("0") : format_double(s.outer.value())) + "[";
          for (std::size_t b = 0; b < s.blocks.size(); ++b) {
            if (b) out += ",";
            out += to_string(*s.blocks[b].space) + "^" + std::to_string(s.blocks[b].dim);
          }
          return out + "]";
        } else if constexpr (std::is_same_v<T, Lorentz>) {
          if (const auto* pq = std::get_if<LorentzPQ>(&s.weights))
            return "lorentz:p=" + format_double(pq->p) + ",q=" + format_double(pq->q);
          std::string out = "lorentz:q=" + format_double(s.q) + ",w=[";
          const auto& w = std::get<std::vector<double>>(s.weights);
          for (std::size_t i = 0; i < w.size(); ++i) out += (i ? "," : "") + format_double(w[i]);
          return out + "]";
        } else {
          return "bv";
        }
      },
      space.variant());
}

namespace {

std::pair<std::string, std::string> split_key(std::string_view kv) {
  auto eq = kv.find('=');
  if (eq == std::string_view::npos) throw std::invalid_argument("expected key=value, got '" + std::string(kv) + "'");
  return {std::string(detail::trim(kv.substr(0, eq))), std::string(detail::trim(kv.substr(eq + 1)))};
}

}  // namespace

SpaceDesc parse_space(std::string_view text) {
  using namespace detail;
  text = trim(text);
  if (text == "bv") return SpaceDesc::bv();
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("unknown space '" + std::string(text) + "'");
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest = trim(text.substr(colon + 1));

  if (kind == "lp") {
    if (rest == "inf") return SpaceDesc::lp_inf();
    return SpaceDesc::lp(parse_double(rest));
  }
  if (kind == "c0") return SpaceDesc::c0(parse_int(rest));
  if (kind == "lorentz") {
    std::optional<double> p, q;
    std::optional<std::vector<double>> w;
    for (const auto& part : split_top_level(rest, ',')) {
      auto [key, value] = split_key(part);
      if (key == "p") {
        p = parse_double(value);
      } else if (key == "q") {
        q = parse_double(value);
      } else if (key == "w") {
        if (value.size() < 2 || value.front() != '[' || value.back() != ']')
          throw std::invalid_argument("Lorentz weights must be written as w=[...]");
        std::vector<double> ws;
        for (const auto& item : split_top_level(std::string_view(value).substr(1, value.size() - 2), ','))
          ws.push_back(parse_double(item));
        w = std::move(ws);
      } else {
        throw std::invalid_argument("unknown Lorentz parameter '" + key + "'");
      }
    }
    if (!q) throw std::invalid_argument("Lorentz space needs q");
    if (p && w) throw std::invalid_argument("Lorentz space takes either p or explicit weights, not both");
    if (p) return SpaceDesc::lorentz_pq(*p, *q);
    if (w) return SpaceDesc::lorentz(*q, std::move(*w));
    throw std::invalid_argument("Lorentz space needs p or w=[...]");
  }
  if (kind == "mixed") {
    const auto open = rest.find('[');
    if (open == std::string_view::npos || rest.back() != ']')
      throw std::invalid_argument("mixed space must look like mixed:q=Q[space^dim,...]");
    auto [key, value] = split_key(rest.substr(0, open));
    if (key != "q") throw std::invalid_argument("mixed space needs q=");
    const double qv = parse_double(value);
    const Exponent outer = qv == 0.0 ? Exponent::sup() : Exponent::finite(qv);
    std::vector<std::pair<SpaceDesc, Index>> blocks;
    for (const auto& item : split_top_level(rest.substr(open + 1, rest.size() - open - 2), ',')) {
      // the dimension suffix is the last '^' outside any brackets
      int depth = 0;
      std::size_t caret = std::string::npos;
      for (std::size_t i = 0; i < item.size(); ++i) {
        if (item[i] == '[' || item[i] == '(') ++depth;
        if (item[i] == ']' || item[i] == ')') --depth;
        if (item[i] == '^' && depth == 0) caret = i;
      }
      if (caret == std::string::npos) throw std::invalid_argument("mixed block '" + item + "' lacks ^dim");
      blocks.emplace_back(parse_space(std::string_view(item).substr(0, caret)),
                          parse_int(std::string_view(item).substr(caret + 1)));
    }
    return SpaceDesc::mixed(outer, std::move(blocks));
  }
  throw std::invalid_argument("unknown space kind '" + std::string(kind) + "'");
}

}  // namespace condgreedy
