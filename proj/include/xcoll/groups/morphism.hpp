#pragma once

#include <string>
#include <vector>

#include "xcoll/groups/finite_group.hpp"

namespace xcoll::groups {

struct GroupMorphism {
  GroupPtr source;
  GroupPtr target;
  std::vector<Element> images;  // one per source generator

  Element apply(Element a) const {
    Element r = target->identity();
    for (auto s : source->bfs_word(a)) r = target->mul(r, images.at(s));
    return r;
  }
};

struct MorphismCheck {
  bool homomorphism = false;
  bool automorphism = false;
  bool injective = false;
  std::string reason;
};

inline MorphismCheck check_morphism(const GroupMorphism& m) {
  MorphismCheck out;
  const auto& src = *m.source;
  const auto& tgt = *m.target;
  if (m.images.size() != src.num_generators()) {
    out.reason = "image count differs from generator count";
    return out;
  }
  for (auto e : m.images)
    if (!tgt.contains(e)) {
      out.reason = "generator image outside target";
      return out;
    }
  if (src.has_presentation()) {
    for (std::size_t i = 0; i < src.relators().size(); ++i) {
      Element r = tgt.identity();
      for (int c : src.relators()[i]) r = tgt.mul(r, c % 2 == 0 ? m.images[c / 2] : tgt.inv(m.images[c / 2]));
      if (r != tgt.identity()) {
        out.reason = "relator " + src.relator_texts()[i] + " maps to " + tgt.render(r);
        return out;
      }
    }
  }
  // defining along BFS words, every Cayley edge a -> a s must map compatibly
  std::vector<Element> img(src.order());
  for (auto a : src.elements()) img[a.index] = m.apply(a);
  for (auto a : src.elements())
    for (std::size_t s = 0; s < src.num_generators(); ++s)
      if (img[src.right_generator(a, s).index] != tgt.mul(img[a.index], m.images[s])) {
        out.reason = "not compatible with multiplication at " + src.render(a) + " * " + src.generator_names()[s];
        return out;
      }
  out.homomorphism = true;
  std::vector<char> hit(tgt.order(), 0);
  out.injective = true;
  for (auto e : img) {
    if (hit[e.index]) out.injective = false;
    hit[e.index] = 1;
  }
  out.automorphism = out.injective && m.source == m.target;
  if (!out.automorphism && m.source == m.target) out.reason = "endomorphism is not bijective";
  return out;
}

}  // namespace xcoll::groups
