#include "loopterm/algebraic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>

// Complex root isolation: Aberth approximations, Newton polishing in dyadic
// rationals, certified inclusion disks from the Weierstrass corrections.

namespace loopterm {

namespace {

struct GaussQ {
  Rational re, im;
};

GaussQ gmul(const GaussQ& a, const GaussQ& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
GaussQ gsub(const GaussQ& a, const GaussQ& b) { return {a.re - b.re, a.im - b.im}; }
GaussQ gadd(const GaussQ& a, const GaussQ& b) { return {a.re + b.re, a.im + b.im}; }
Rational gabs2(const GaussQ& a) { return a.re * a.re + a.im * a.im; }
GaussQ gdiv(const GaussQ& a, const GaussQ& b) {
  Rational d = gabs2(b);
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
GaussQ ground(const GaussQ& a, long bits) {
  // round to nearest dyadic
  auto r = [bits](const Rational& q) {
    Rational half(1, 2);
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(bits));
    Rational v(floor_div(q * scale + half), scale);
    v.canonicalize();
    return v;
  };
  return {r(a.re), r(a.im)};
}

void horner(const Poly& p, const GaussQ& z, GaussQ& val, GaussQ& der) {
  val = {0, 0};
  der = {0, 0};
  for (int i = p.degree(); i >= 0; --i) {
    der = gadd(gmul(der, z), val);
    val = gmul(val, z);
    val.re += p.coeff(i);
  }
}

using cld = std::complex<long double>;

bool aberth_double(const Poly& p, std::vector<cld>& z) {
  int n = p.degree();
  std::vector<long double> c(static_cast<size_t>(n + 1));
  for (int i = 0; i <= n; ++i) c[static_cast<size_t>(i)] = p.coeff(i).get_d();
  long double radius = 0;
  for (int i = 0; i < n; ++i) {
    long double a = std::fabs(c[static_cast<size_t>(i)] / c[static_cast<size_t>(n)]);
    if (a > 0) radius = std::max(radius, std::pow(a, 1.0L / static_cast<long double>(n - i)));
  }
  if (radius == 0) radius = 1;
  z.resize(static_cast<size_t>(n));
  const long double two_pi = 6.283185307179586476925286766559L;
  for (int k = 0; k < n; ++k)
    z[static_cast<size_t>(k)] = std::polar(radius, two_pi * k / n + 0.7L);
  for (int iter = 0; iter < 500; ++iter) {
    bool done = true;
    for (int i = 0; i < n; ++i) {
      cld zi = z[static_cast<size_t>(i)];
      cld v = c[static_cast<size_t>(n)], d = 0;
      for (int k = n - 1; k >= 0; --k) {
        d = d * zi + v;
        v = v * zi + c[static_cast<size_t>(k)];
      }
      if (v == cld(0)) continue;
      cld w = v / d;
      cld s = 0;
      for (int j = 0; j < n; ++j)
        if (j != i) s += 1.0L / (zi - z[static_cast<size_t>(j)]);
      cld step = w / (1.0L - w * s);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return false;
      z[static_cast<size_t>(i)] = zi - step;
      if (std::abs(step) > 1e-18L * (1 + std::abs(zi))) done = false;
    }
    if (done) return true;
  }
  return true;
}

void aberth_exact(const Poly& p, std::vector<GaussQ>& z, long bits, int iters) {
  size_t n = z.size();
  for (int it = 0; it < iters; ++it)
    for (size_t i = 0; i < n; ++i) {
      GaussQ v, d;
      horner(p, z[i], v, d);
      if (v.re == 0 && v.im == 0) continue;
      if (d.re == 0 && d.im == 0) continue;
      GaussQ w = gdiv(v, d);
      GaussQ s{0, 0};
      bool bad = false;
      for (size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        GaussQ diff = gsub(z[i], z[j]);
        if (diff.re == 0 && diff.im == 0) {
          bad = true;
          break;
        }
        s = gadd(s, gdiv({1, 0}, diff));
      }
      if (bad) {
        Rational eps(1, 1000 + static_cast<long>(i));
        z[i] = {z[i].re + eps, z[i].im - eps};
        continue;
      }
      GaussQ den = gsub({1, 0}, gmul(w, s));
      if (den.re == 0 && den.im == 0) continue;
      z[i] = ground(gsub(z[i], gdiv(w, den)), bits);
    }
}

void newton(const Poly& p, std::vector<GaussQ>& z, long bits) {
  int steps = 3;
  for (long b = 16; b < bits; b *= 2) ++steps;
  for (auto& zi : z)
    for (int k = 0; k < steps; ++k) {
      GaussQ v, d;
      horner(p, zi, v, d);
      if ((v.re == 0 && v.im == 0) || (d.re == 0 && d.im == 0)) break;
      zi = ground(gsub(zi, gdiv(v, d)), bits);
    }
}

// Inclusion radii; returns false if two centers coincide.
bool inclusion_radii(const Poly& monic, const std::vector<GaussQ>& z, long bits, std::vector<Rational>& radius) {
  size_t n = z.size();
  radius.assign(n, Rational(0));
  Rational n2(static_cast<long>(n * n));
  for (size_t i = 0; i < n; ++i) {
    GaussQ v, d;
    horner(monic, z[i], v, d);
    Rational num = gabs2(v);
    if (num == 0) continue;
    Rational den = 1;
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      Rational a = gabs2(gsub(z[i], z[j]));
      if (a == 0) return false;
      den *= a;
    }
    radius[i] = sqrt_upper(n2 * num / den, bits + 8);
  }
  // strictly positive so that roots are interior
  Rational tiny(1);
  mpz_mul_2exp(tiny.get_den_mpz_t(), tiny.get_den_mpz_t(), static_cast<unsigned long>(bits + 16));
  tiny.canonicalize();
  for (auto& r : radius) r += tiny;
  return true;
}

struct CacheEntry {
  long bits = 0;
  std::vector<GaussQ> approx;
  std::vector<Box> boxes;
};

std::mutex cache_mutex;
std::map<std::vector<Rational>, CacheEntry>& cache() {
  static std::map<std::vector<Rational>, CacheEntry> c;
  return c;
}

bool try_boxes(const Poly& monic, const std::vector<GaussQ>& z, long bits, std::vector<Box>& out) {
  std::vector<Rational> r;
  if (!inclusion_radii(monic, z, bits, r)) return false;
  size_t n = z.size();
  std::vector<Box> boxes(n);
  for (size_t i = 0; i < n; ++i)
    boxes[i] = {z[i].re - r[i], z[i].re + r[i], z[i].im - r[i], z[i].im + r[i]};
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (boxes[i].intersects(boxes[j])) return false;
  // Real certification by conjugate symmetry.
  for (size_t i = 0; i < n; ++i) {
    Box& b = boxes[i];
    if (b.im_lo > 0 || b.im_hi < 0) continue;
    Box m = b.mirrored();
    for (size_t j = 0; j < n; ++j)
      if (j != i && m.intersects(boxes[j])) return false;
    b.im_lo = 0;
    b.im_hi = 0;
  }
  out = std::move(boxes);
  return true;
}

}  // namespace

Rational Box::width() const { return std::max(re_hi - re_lo, im_hi - im_lo); }

bool Box::contains(const Box& o) const {
  return re_lo <= o.re_lo && o.re_hi <= re_hi && im_lo <= o.im_lo && o.im_hi <= im_hi;
}

bool Box::intersects(const Box& o) const {
  return !(re_hi < o.re_lo || o.re_hi < re_lo || im_hi < o.im_lo || o.im_hi < im_lo);
}

bool Box::contains_point(const Rational& re, const Rational& im) const {
  return re_lo <= re && re <= re_hi && im_lo <= im && im <= im_hi;
}

CInterval Box::to_interval(long prec) const {
  return {Interval(re_lo, re_hi, prec), Interval(im_lo, im_hi, prec)};
}

std::string Box::to_string() const {
  return "[" + re_lo.get_str() + ", " + re_hi.get_str() + "] x [" + im_lo.get_str() + ", " + im_hi.get_str() + "]";
}

std::vector<Box> isolate_boxes(const Poly& squarefree, long bits) {
  Poly monic = squarefree.monic();
  int n = monic.degree();
  if (n <= 0) return {};
  if (n == 1) {
    Rational r = -monic.coeff(0);
    return {Box{r, r, 0, 0}};
  }
  const auto& key = monic.coeffs();
  CacheEntry entry;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache().find(key);
    if (it != cache().end()) {
      if (it->second.bits >= bits) return it->second.boxes;
      entry = it->second;
    }
  }
  if (entry.approx.empty()) {
    std::vector<cld> z;
    bool ok = aberth_double(monic, z);
    entry.approx.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      if (ok) {
        Rational re(static_cast<double>(z[static_cast<size_t>(i)].real()));
        Rational im(static_cast<double>(z[static_cast<size_t>(i)].imag()));
        entry.approx[static_cast<size_t>(i)] = {re, im};
      } else {
        entry.approx[static_cast<size_t>(i)] = {Rational(i + 1, n), Rational(1, 2 + i)};
      }
    }
  }
  long prec = std::max<long>(bits + 10, 64);
  std::vector<Box> boxes;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 40) throw std::runtime_error("root isolation did not converge for " + monic.to_string());
    newton(monic, entry.approx, prec);
    if (try_boxes(monic, entry.approx, prec, boxes)) {
      bool narrow = true;
      Rational limit(1);
      mpz_mul_2exp(limit.get_den_mpz_t(), limit.get_den_mpz_t(), static_cast<unsigned long>(bits));
      limit.canonicalize();
      for (auto& b : boxes)
        if (b.width() > limit) narrow = false;
      if (narrow) break;
      prec *= 2;
      continue;
    }
    aberth_exact(monic, entry.approx, prec, 8);
    if (attempt % 2 == 1) prec *= 2;
  }
  // Deterministic order: by real part, then imaginary part.
  std::vector<size_t> idx(boxes.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    Rational ra = boxes[a].re_lo + boxes[a].re_hi, rb = boxes[b].re_lo + boxes[b].re_hi;
    if (ra != rb) return ra < rb;
    return boxes[a].im_lo + boxes[a].im_hi < boxes[b].im_lo + boxes[b].im_hi;
  });
  std::vector<Box> sorted;
  std::vector<GaussQ> approx;
  for (size_t i : idx) {
    sorted.push_back(boxes[i]);
    approx.push_back(entry.approx[i]);
  }
  entry.approx = approx;
  entry.boxes = sorted;
  entry.bits = bits;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& slot = cache()[key];
    if (slot.bits < bits) slot = entry;
  }
  return sorted;
}

}  // namespace loopterm
