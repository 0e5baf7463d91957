#include "condgreedy/basis_spec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "condgreedy/detail/text.hpp"

namespace condgreedy {

namespace {

using detail::parse_int;
using detail::split_top_level;
using detail::trim;

Index parse_term(std::string_view t) {
  t = trim(t);
  if (const auto caret = t.find('^'); caret != std::string_view::npos) {
    const long long base = parse_int(t.substr(0, caret));
    const long long exp = parse_int(t.substr(caret + 1));
    if (exp < 0 || exp > 40) throw std::invalid_argument("exponent out of range in '" + std::string(t) + "'");
    long long v = 1;
    for (long long i = 0; i < exp; ++i) v *= base;
    return v;
  }
  return parse_int(t);
}

bool is_power(std::string_view t) { return t.find('^') != std::string_view::npos; }

[[noreturn]] void bad_spec(std::string_view spec, const std::string& why) {
  throw std::invalid_argument("bad basis spec '" + std::string(spec) + "': " + why);
}

struct Call {
  std::string name;
  std::vector<std::string> args;
  bool parenthesized = false;
};

Call split_call(std::string_view spec) {
  spec = trim(spec);
  Call c;
  const auto open = spec.find('(');
  const auto colon = spec.find(':');
  if (open != std::string_view::npos && (colon == std::string_view::npos || open < colon)) {
    if (spec.back() != ')') bad_spec(spec, "missing ')'");
    c.name = std::string(trim(spec.substr(0, open)));
    c.args = split_top_level(spec.substr(open + 1, spec.size() - open - 2), ',');
    c.parenthesized = true;
  } else if (colon != std::string_view::npos) {
    c.name = std::string(trim(spec.substr(0, colon)));
    c.args = {std::string(spec.substr(colon + 1))};
  } else {
    c.name = std::string(spec);
  }
  return c;
}

std::map<std::string, std::string> keyword_args(std::string_view spec, const std::vector<std::string>& args,
                                                std::size_t first) {
  std::map<std::string, std::string> kw;
  for (std::size_t i = first; i < args.size(); ++i) {
    const auto eq = args[i].find('=');
    if (eq == std::string::npos) bad_spec(spec, "expected key=value, got '" + args[i] + "'");
    kw[std::string(trim(std::string_view(args[i]).substr(0, eq)))] =
        std::string(trim(std::string_view(args[i]).substr(eq + 1)));
  }
  return kw;
}

double parse_exponent(std::string_view v) {
  v = trim(v);
  if (v == "inf" || v == "0") return 0.0;
  return detail::parse_double(v);
}

BasisTruncation build(std::string_view spec, std::optional<Index> default_size) {
  const Call c = split_call(spec);
  auto size_arg = [&](std::size_t i) -> Index {
    if (i < c.args.size()) return static_cast<Index>(parse_int(c.args[i]));
    if (default_size) return *default_size;
    bad_spec(spec, "missing size");
  };
  if (c.name == "lindenstrauss" || c.name == "summing" || c.name == "difference") {
    if (c.args.size() > 1) bad_spec(spec, "takes one size");
    const Index d = size_arg(0);
    if (d < 1) bad_spec(spec, "size must be positive");
    return c.name == "lindenstrauss" ? lindenstrauss(d) : c.name == "summing" ? summing(d) : difference(d);
  }
  if (c.name == "unit") {
    const Index d = size_arg(0);
    if (d < 1) bad_spec(spec, "size must be positive");
    if (c.args.size() < 2) return unit_vector_system(d, SpaceDesc::lp(2));
    // space forms such as lorentz:p=2,q=1 contain commas of their own
    std::string space = c.args[1];
    for (std::size_t i = 2; i < c.args.size(); ++i) space += "," + c.args[i];
    return unit_vector_system(d, parse_space(space));
  }
  if (!c.parenthesized) bad_spec(spec, "unknown family '" + c.name + "'");
  if (c.name == "interleave") {
    if (c.args.size() != 2) bad_spec(spec, "interleave takes two bases");
    return interleave(build(c.args[0], default_size), build(c.args[1], default_size));
  }
  if (c.name == "truncate") {
    if (c.args.size() != 2) bad_spec(spec, "truncate takes a basis and a size");
    return truncate(build(c.args[0], default_size), static_cast<Index>(parse_int(c.args[1])));
  }
  if (c.name == "blocksum" || c.name == "pqsplit") {
    if (c.args.empty()) bad_spec(spec, "missing base basis");
    auto kw = keyword_args(spec, c.args, 1);
    if (!kw.count("dims")) bad_spec(spec, "missing dims=");
    std::string_view dims_text = kw["dims"];
    if (dims_text.size() >= 2 && dims_text.front() == '[' && dims_text.back() == ']')
      dims_text = dims_text.substr(1, dims_text.size() - 2);
    const std::vector<Index> dims = parse_range(dims_text);
    const Index top = *std::max_element(dims.begin(), dims.end());
    const BasisTruncation base = build(c.args[0], top);
    const double p = kw.count("p") ? parse_exponent(kw["p"]) : 1.0;
    if (c.name == "blocksum") {
      for (const auto& [key, value] : kw)
        if (key != "dims" && key != "p") bad_spec(spec, "unknown key '" + key + "'");
      return block_sum(base, dims, p);
    }
    for (const auto& [key, value] : kw)
      if (key != "dims" && key != "p" && key != "q") bad_spec(spec, "unknown key '" + key + "'");
    const double q = kw.count("q") ? parse_exponent(kw["q"]) : 1.0;
    std::vector<PQBlock> blocks;
    for (Index d : dims) blocks.push_back({d, half_split_maps(truncate(base, d).ambient_dim(), SpaceDesc::lp(1))});
    return pq_block_sum(base, blocks, p, q);
  }
  bad_spec(spec, "unknown combinator '" + c.name + "'");
}

}  // namespace

std::vector<Index> parse_range(std::string_view text) {
  std::vector<Index> out;
  for (const auto& item : split_top_level(text, ',')) {
    const std::string_view t = trim(item);
    if (t.empty()) throw std::invalid_argument("empty entry in range '" + std::string(text) + "'");
    if (const auto dots = t.find(".."); dots != std::string_view::npos) {
      const auto lo_text = t.substr(0, dots), hi_text = t.substr(dots + 2);
      const Index lo = parse_term(lo_text), hi = parse_term(hi_text);
      if (hi < lo) throw std::invalid_argument("empty range '" + std::string(t) + "'");
      if (is_power(lo_text) && is_power(hi_text)) {
        const auto base = parse_int(lo_text.substr(0, lo_text.find('^')));
        if (base < 2) throw std::invalid_argument("power range needs base >= 2");
        for (Index v = lo; v <= hi; v *= base) out.push_back(v);
      } else {
        for (Index v = lo; v <= hi; ++v) out.push_back(v);
      }
    } else {
      out.push_back(parse_term(t));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw std::invalid_argument("empty range");
  return out;
}

BasisTruncation parse_basis(std::string_view spec) { return build(spec, std::nullopt); }

SpecCall split_spec(std::string_view spec) {
  Call c = split_call(spec);
  return {std::move(c.name), std::move(c.args)};
}

}  // namespace condgreedy
