#include "oplab/spaces.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "accum.hpp"

namespace oplab {

namespace {

std::string num_str(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool is_inf_token(std::string_view s) {
  if (s.size() != 3) return false;
  auto lower = [](char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  };
  return lower(s[0]) == 'i' && lower(s[1]) == 'n' && lower(s[2]) == 'f';
}

}  // namespace

Exponent Exponent::finite(double p) {
  if (!std::isfinite(p) || p < 1.0)
    throw InvalidInputError("p must be >= 1 (got " + num_str(p) + ")");
  return Exponent(p, false);
}

Exponent Exponent::inf() { return Exponent(0.0, true); }

Exponent Exponent::parse(std::string_view text) {
  if (is_inf_token(text)) return inf();
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ParseError("p: '" + std::string(text) + "' is not a decimal or 'inf'");
  if (!std::isfinite(v) || v < 1.0)
    throw ParseError("p must be >= 1 (got '" + std::string(text) + "')");
  return Exponent(v, false);
}

double Exponent::value() const {
  if (inf_) throw InvalidInputError("finite exponent required, got inf");
  return value_;
}

Exponent Exponent::dual() const {
  if (inf_) return Exponent(1.0, false);
  if (value_ == 1.0) return inf();
  return Exponent(value_ / (value_ - 1.0), false);
}

std::string Exponent::str() const { return inf_ ? "inf" : num_str(value_); }

SpaceSpec::SpaceSpec(Exponent outer, std::vector<std::int32_t> block_dims)
    : outer_(outer), dims_(std::move(block_dims)), total_(0) {
  if (dims_.empty()) throw InvalidInputError("space needs at least one block");
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i] < 1)
      throw InvalidInputError("block " + std::to_string(i + 1) +
                              " has non-positive dimension");
    total_ += dims_[i];
  }
}

std::string SpaceSpec::str() const {
  std::string s = "p=" + outer_.str() + ";blocks=";
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(dims_[i]);
  }
  return s;
}

SpaceSpec SpaceSpec::parse(std::string_view text) {
  constexpr std::string_view kUsage = "expected 'p=<decimal|inf>;blocks=<n1>,<n2>,...'";
  if (text.substr(0, 2) != "p=")
    throw ParseError("space: " + std::string(kUsage));
  const auto semi = text.find(';');
  if (semi == std::string_view::npos)
    throw ParseError("space: missing ';blocks=' — " + std::string(kUsage));
  const Exponent p = Exponent::parse(text.substr(2, semi - 2));
  std::string_view rest = text.substr(semi + 1);
  if (rest.substr(0, 7) != "blocks=")
    throw ParseError("space: " + std::string(kUsage));
  rest.remove_prefix(7);
  if (rest.empty()) throw ParseError("blocks: empty list");
  std::vector<std::int32_t> dims;
  std::size_t start = 0, idx = 0;
  while (start <= rest.size()) {
    auto end = rest.find(',', start);
    if (end == std::string_view::npos) end = rest.size();
    const std::string_view tok = rest.substr(start, end - start);
    std::int32_t n = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), n);
    if (tok.empty() || res.ec != std::errc{} ||
        res.ptr != tok.data() + tok.size() || n < 1)
      throw ParseError("blocks[" + std::to_string(idx + 1) + "]: '" +
                       std::string(tok) + "' is not a positive integer");
    dims.push_back(n);
    ++idx;
    if (end == rest.size()) break;
    start = end + 1;
  }
  return SpaceSpec(p, std::move(dims));
}

BlockVector::BlockVector(SpaceSpec spec) : spec_(std::move(spec)) {
  blocks_.reserve(spec_.block_count());
  for (std::int32_t i = 0; i < spec_.block_count(); ++i)
    blocks_.emplace_back(spec_.dim(i), 0.0);
}

BlockVector::BlockVector(SpaceSpec spec, std::vector<std::vector<double>> blocks)
    : spec_(std::move(spec)), blocks_(std::move(blocks)) {
  if (static_cast<std::int32_t>(blocks_.size()) != spec_.block_count())
    throw ShapeError("vector has " + std::to_string(blocks_.size()) +
                     " blocks, spec has " + std::to_string(spec_.block_count()));
  for (std::int32_t i = 0; i < spec_.block_count(); ++i)
    if (static_cast<std::int64_t>(blocks_[i].size()) != spec_.dim(i))
      throw ShapeError("block " + std::to_string(i + 1) + " has length " +
                       std::to_string(blocks_[i].size()) + ", spec says " +
                       std::to_string(spec_.dim(i)));
}

double vec_norm(const BlockVector& x) {
  const SpaceSpec& sp = x.spec();
  const bool comp = sp.total_dim() > 64;
  std::vector<double> block_norms(sp.block_count());
  for (std::int32_t i = 0; i < sp.block_count(); ++i) {
    for (std::int32_t c = 0; c < sp.dim(i); ++c)
      if (!std::isfinite(x.block(i)[c]))
        throw InvalidInputError("non-finite coordinate at block " +
                                std::to_string(i + 1) + ", coord " +
                                std::to_string(c + 1));
    block_norms[i] = detail::l1_sum(x.block(i), comp);
  }
  const Exponent& p = sp.outer();
  if (p.is_inf()) return detail::max_nonneg(block_norms);
  if (p.is_one()) return detail::sum_nonneg(block_norms, comp);
  return detail::lp_nonneg(block_norms, p.value(), comp);
}

BlockVector basis_vector(const SpaceSpec& spec, std::int32_t block,
                         std::int32_t coord, int sign) {
  if (block < 0 || block >= spec.block_count())
    throw RangeError("block index " + std::to_string(block + 1) +
                     " out of range [1, " + std::to_string(spec.block_count()) +
                     "]");
  if (coord < 0 || coord >= spec.dim(block))
    throw RangeError("coord index " + std::to_string(coord + 1) +
                     " out of range [1, " + std::to_string(spec.dim(block)) +
                     "] in block " + std::to_string(block + 1));
  if (sign != 1 && sign != -1)
    throw InvalidInputError("sign must be +1 or -1");
  BlockVector e(spec);
  e.block(block)[coord] = static_cast<double>(sign);
  return e;
}

BlockVector vec_lincomb(double a, const BlockVector& x, double b,
                        const BlockVector& y) {
  if (x.spec() != y.spec())
    throw ShapeError("vec_lincomb: operands live in different spaces");
  BlockVector z(x.spec());
  for (std::int32_t i = 0; i < x.spec().block_count(); ++i)
    for (std::int32_t c = 0; c < x.spec().dim(i); ++c)
      z.block(i)[c] = a * x.block(i)[c] + b * y.block(i)[c];
  return z;
}

}  // namespace oplab
