#include "sutured/window.hpp"

namespace sutured {

std::string SurfaceIndex::to_string() const {
  switch (kind) {
    case Kind::Plus: return "+";
    case Kind::Minus: return "-";
    case Kind::Natural: break;
  }
  return std::to_string(n);
}

int WindowParams::tau_of(const SurfaceIndex& j) const {
  switch (j.kind) {
    case SurfaceIndex::Kind::Plus: return tau_plus;
    case SurfaceIndex::Kind::Minus: return tau_minus;
    case SurfaceIndex::Kind::Natural: break;
  }
  auto it = tau.find(j.n);
  return it == tau.end() ? 0 : it->second;
}

void WindowParams::check() const {
  if (q <= 0) throw InvalidInput("q must be positive");
  if (chi_bar_plus > 0) throw InvalidInput("chi(S+) must be at most 0");
  if (n < 0) throw InvalidInput("n must be non-negative");
  auto ok = [](int t) { return t == 0 || t == -1; };
  if (!ok(tau_plus) || !ok(tau_minus)) throw InvalidInput("tau values must be 0 or -1");
  for (const auto& [k, t] : tau)
    if (!ok(t) || k < 0) throw InvalidInput("tau values must be 0 or -1");
}

Int chi_bar(const WindowParams& w, const SurfaceIndex& j) {
  switch (j.kind) {
    case SurfaceIndex::Kind::Plus: return w.chi_bar_plus;
    case SurfaceIndex::Kind::Minus: return checked::add(checked::sub(w.chi_bar_plus, w.q), w.tau_minus);
    case SurfaceIndex::Kind::Natural: break;
  }
  return checked::add(checked::sub(w.chi_bar_plus, checked::mul(j.n, w.q)), w.tau_of(j));
}

Bounds bounds(const WindowParams& w, const SurfaceIndex& j) {
  w.check();
  Int c = chi_bar(w, j);
  if (c % 2 != 0)
    throw ParityError("chi(S_" + j.to_string() + ") = " + std::to_string(c) + " is odd");
  return {-c / 2, c / 2 - w.tau_of(j)};
}

WindowReport window_constants(const WindowParams& w) {
  WindowReport r;
  r.plus = bounds(w, SurfaceIndex::plus());
  r.minus = bounds(w, SurfaceIndex::minus());
  r.at_n = bounds(w, SurfaceIndex::natural(w.n));
  r.at_next = bounds(w, SurfaceIndex::natural(w.n + 1));
  r.P = r.at_n.i_min + (w.n + 1) * w.q - w.tau_plus;
  r.rho = r.at_n.i_max - w.n * w.q;
  r.Q = r.P - w.q + w.tau_plus;
  r.valid = r.Q - r.rho > w.q;
  return r;
}

namespace {

IdentityResult compare(std::string name, Int lhs, Int rhs) {
  return {std::move(name), lhs == rhs, std::to_string(lhs) + " = " + std::to_string(rhs)};
}

}  // namespace

std::vector<IdentityResult> identity_suite(const WindowParams& w) {
  WindowReport r = window_constants(w);
  WindowParams next = w;
  next.n = w.n + 1;
  WindowReport r1 = window_constants(next);
  std::vector<IdentityResult> out;
  // P_n and rho_n from their defining expressions.
  out.push_back(compare("P-definition",
                        r.at_next.i_max + (r.at_n.i_min - r.at_next.i_min) - (r.plus.i_max - r.plus.i_min), r.P));
  out.push_back(compare("rho-definition",
                        r.at_next.i_min - (r.at_next.i_max - r.at_n.i_max) + (r.minus.i_max - r.minus.i_min), r.rho));
  out.push_back(compare("top-to-Q", r.at_n.i_max - r.Q, -w.chi_bar_plus));
  out.push_back(compare("rho-to-bottom", r.rho - r.at_n.i_min, -w.chi_bar_plus));
  out.push_back(compare("P-minus-rho", r.P - r.rho, w.chi_bar_plus - w.tau_plus + (w.n + 1) * w.q));
  out.push_back(compare("shift-min", r1.P - r.P, r.at_next.i_min - r.at_n.i_min + w.q));
  out.push_back(compare("shift-max", r1.P - r.P, r.at_next.i_max - r.at_n.i_max));
  try {
    BlockSums b = block_sums(w, w.n);
    out.push_back(compare("blocks-first", b.total_first, b.expected));
    out.push_back(compare("blocks-second", b.total_second, b.expected));
    out.push_back(compare("blocks-window", b.expected, b.window_length));
  } catch (const NegativeBlock&) {
  }
  return out;
}

BlockSums block_sums(const WindowParams& w, Int n) {
  w.check();
  const Int q = w.q, c = w.chi_bar_plus;
  Int middle = c + (n - 1) * q - 1;
  if (middle < 0)
    throw NegativeBlock("middle block chi(S+) + (n-1)q - 1 = " + std::to_string(middle) + " is negative");
  BlockSums b;
  b.first = {q, -c + 1, middle, q, -c + 1};
  b.second = {-c + 1, q, middle, -c + 1, q};
  for (Int v : b.first) b.total_first += v;
  for (Int v : b.second) b.total_second += v;
  b.expected = (n + 1) * q - c + 1;
  Bounds top = bounds(w, SurfaceIndex::natural(n + 1));
  b.window_length = top.i_max - top.i_min + 1;
  return b;
}

}  // namespace sutured
