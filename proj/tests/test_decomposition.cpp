#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "kahler/decomposition.hpp"
#include "kahler/errors.hpp"
#include "kahler/models.hpp"
#include "oracles.hpp"

using namespace kahler;

namespace {

std::vector<int> sizes(const ProductStructure& s) {
  std::vector<int> out;
  for (const auto& b : s.blocks) out.push_back(static_cast<int>(b.indices.size()));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("example product splits into a surface and a projective block") {
  std::mt19937_64 g(1);
  const auto t = conjugate_frame(example_1_2(2), oracle::unitary(g, 3));
  const auto s = detect_blocks(t, 1e-8, 5);
  CHECK(sizes(s) == std::vector<int>{1, 2});
  CHECK(is_unitary(s.change_of_frame));
  CHECK(max_mixed_component(t, s) < 1e-10);
  CHECK_FALSE(s.degeneracy_warning);
  for (const auto& b : s.blocks) {
    if (b.indices.size() == 1) {
      CHECK(b.tag.kind == BlockKind::Surface);
      CHECK(b.tag.parameter == doctest::Approx(-4.0));
    } else {
      CHECK(b.tag.kind == BlockKind::FubiniStudyLike);
      CHECK(b.tag.parameter == doctest::Approx(2.0));
    }
  }
  // blocks are contiguous
  int next = 0;
  for (const auto& b : s.blocks)
    for (int i : b.indices) CHECK(i == next++);
}

TEST_CASE("flat directions become singleton flat blocks") {
  std::mt19937_64 g(2);
  const auto t = conjugate_frame(product(flat(2), fubini_study(2, 3)), oracle::unitary(g, 4));
  const auto s = detect_blocks(t);
  CHECK(sizes(s) == std::vector<int>{1, 1, 2});
  int flats = 0;
  for (const auto& b : s.blocks) flats += b.tag.kind == BlockKind::Flat;
  CHECK(flats == 2);
  CHECK(detect_blocks(flat(3)).blocks.size() == 3);
}

TEST_CASE("irreducible generic tensor stays one block") {
  std::mt19937_64 g(3);
  const auto s = detect_blocks(oracle::generic(g, 4));
  REQUIRE(s.blocks.size() == 1);
  CHECK(s.blocks[0].tag.kind == BlockKind::Unclassified);
}

TEST_CASE("two equal surfaces still separate") {
  std::mt19937_64 g(4);
  const auto t = conjugate_frame(product(riemann_surface(1), riemann_surface(1)), oracle::unitary(g, 2));
  const auto s = detect_blocks(t);
  CHECK(sizes(s) == std::vector<int>{1, 1});
  for (const auto& b : s.blocks) CHECK(b.tag.parameter == doctest::Approx(1.0));
}

TEST_CASE("detection is deterministic in the seed") {
  std::mt19937_64 g(5);
  const auto t = conjugate_frame(product(fubini_study(2, 1), riemann_surface(3)), oracle::unitary(g, 3));
  CHECK(detect_blocks(t, 1e-8, 9).change_of_frame == detect_blocks(t, 1e-8, 9).change_of_frame);
}

TEST_CASE("classify_block") {
  CHECK(classify_block(flat(2)).kind == BlockKind::Flat);
  const auto s = classify_block(riemann_surface(-2));
  CHECK(s.kind == BlockKind::Surface);
  CHECK(s.parameter == -2.0);
  const auto f = classify_block(fubini_study(3, 5));
  CHECK(f.kind == BlockKind::FubiniStudyLike);
  CHECK(f.parameter == doctest::Approx(2.5));
  CHECK(classify_block(-1.0 * fubini_study(2, 2)).kind == BlockKind::FubiniStudyLike);
  CHECK(classify_block(example_1_2(2)).kind == BlockKind::Unclassified);
  CHECK(to_string(f) == "FubiniStudyLike(2.5)");
}

TEST_CASE("restrict and mixed-component bookkeeping") {
  const auto t = example_1_2(2);
  const int idx[] = {1, 2};
  CHECK(restrict_to_block(t, idx) == fubini_study(2, 4));
  ProductStructure bad;
  bad.blocks = {Block{{0, 1}, {}}, Block{{1}, {}}};
  bad.change_of_frame = CMatrix::Identity(3, 3);
  CHECK_THROWS_AS(max_mixed_component(t, bad), StructuralError);
  bad.blocks = {Block{{0}, {}}};
  CHECK_THROWS_AS(max_mixed_component(t, bad), StructuralError);
}

TEST_CASE("theorem case logic") {
  ProductStructure s;
  s.blocks = {Block{{0}, {BlockKind::Surface, -4}}, Block{{1, 2}, {BlockKind::FubiniStudyLike, 2}}};
  const bool compact[] = {false, true};

  const double tight[] = {-4.0, 4.0};
  auto rep = theorem_case(s, tight, compact);
  CHECK(rep.kind == TheoremCase::Case2);
  CHECK(rep.designated_block == 0);
  CHECK(rep.witnesses.empty());

  const double loose[] = {-4.0, 3.9};
  rep = theorem_case(s, loose, compact);
  CHECK(rep.kind == TheoremCase::Violation);
  REQUIRE(rep.witnesses.size() == 1);
  CHECK(rep.witnesses[0].other_block == 1);
  CHECK(rep.witnesses[0].required_min == 4.0);

  const double both[] = {-1.0, -1.0};
  CHECK(theorem_case(s, both, compact).kind == TheoremCase::Violation);

  const double none[] = {0.0, 4.0};
  CHECK(theorem_case(s, none, compact).kind == TheoremCase::Case1);

  // a flat factor next to a negative one breaks the bound
  ProductStructure f;
  f.blocks = {Block{{0}, {BlockKind::Surface, -1}}, Block{{1}, {BlockKind::Flat, 0}}};
  const double fm[] = {-1.0, 0.0};
  const bool fc[] = {false, false};
  CHECK(theorem_case(f, fm, fc).kind == TheoremCase::Violation);

  const double short_list[] = {1.0};
  CHECK_THROWS_AS(theorem_case(s, short_list, compact), PreconditionError);
  CHECK(to_string(TheoremCase::Case2) == "Case2");
}
