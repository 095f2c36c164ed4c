#pragma once

#include <random>

#include "sutured/fox.hpp"

namespace sutured::testing {

inline FreeWord random_word(std::mt19937& rng, std::size_t n, std::size_t length) {
  std::vector<Letter> l;
  for (std::size_t i = 0; i < length; ++i) l.push_back({rng() % n, rng() % 2 ? 1 : -1});
  return FreeWord(std::move(l));
}

/// n generators, n - 1 random relators, meridian the first generator.
inline GroupPresentation random_presentation(std::mt19937& rng, std::size_t n, std::size_t max_len) {
  GroupPresentation p;
  for (std::size_t i = 0; i < n; ++i) p.generators.push_back(std::string(1, static_cast<char>('a' + i)));
  for (std::size_t r = 0; r + 1 < n; ++r) p.relators.push_back(random_word(rng, n, 1 + rng() % max_len));
  p.meridian = FreeWord::generator(0);
  return p;
}

/// Hom H(src) -> H(dst) induced by sending generator k of src to images[k].
inline GroupHom induced_hom(const Abelianization& src, const Abelianization& dst, const std::vector<FreeWord>& images) {
  IntMatrix m(dst.group.dim(), src.group.dim());
  for (std::size_t g = 0; g < src.group.dim(); ++g) {
    GroupElem acc = dst.group.identity();
    for (std::size_t k = 0; k < images.size(); ++k)
      acc = dst.group.add(acc, dst.group.scale(dst(images[k]), src.lift(g, k)));
    IntVector c = acc.coords();
    for (std::size_t r = 0; r < c.size(); ++r) m(r, g) = c[r];
  }
  return GroupHom(src.group, dst.group, m);
}

inline TorsionFraction push(const TorsionFraction& f, const GroupHom& h) {
  return {pushforward(f.numerator, h), h(f.denominator), f.column};
}

enum class TietzeMove { Conjugate, Invert, Substitute };

struct TietzeResult {
  GroupPresentation moved;
  std::vector<FreeWord> images;  // generator k of `moved` as a word in the original
};

inline TietzeResult tietze(std::mt19937& rng, const GroupPresentation& p, TietzeMove move) {
  const std::size_t n = p.num_generators();
  TietzeResult out{p, {}};
  for (std::size_t k = 0; k < n; ++k) out.images.push_back(FreeWord::generator(k));
  if (p.relators.empty()) return out;
  std::size_t r = rng() % p.relators.size();
  switch (move) {
    case TietzeMove::Conjugate:
      out.moved.relators[r] = p.relators[r].conjugate_by(random_word(rng, n, 1 + rng() % 3));
      break;
    case TietzeMove::Invert:
      out.moved.relators[r] = p.relators[r].inverse();
      break;
    case TietzeMove::Substitute: {
      if (n < 2) break;
      std::size_t i = rng() % n, j = (i + 1 + rng() % (n - 1)) % n;
      FreeWord img = FreeWord::generator(i) * FreeWord::generator(j);
      for (auto& rel : out.moved.relators) rel = rel.substitute(i, img);
      out.moved.meridian = p.meridian.substitute(i, img);
      out.images[i] = FreeWord::generator(i) * FreeWord::generator(j, -1);
      break;
    }
  }
  return out;
}

}  // namespace sutured::testing
