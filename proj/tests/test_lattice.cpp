#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "perc/lattice.hpp"

using namespace perc;

TEST_CASE("adjacency on the matching pair") {
  CHECK(adjacent({0, 0}, {1, 0}, Kind::nearest));
  CHECK_FALSE(adjacent({0, 0}, {1, 1}, Kind::nearest));
  CHECK(adjacent({0, 0}, {1, 1}, Kind::star));
  CHECK_FALSE(adjacent({0, 0}, {0, 0}, Kind::star));
  CHECK_FALSE(adjacent({0, 0}, {0, 0}, Kind::nearest));
  CHECK_FALSE(adjacent({0, 0}, {2, 0}, Kind::star));

  // Symmetric, irreflexive, nearest contained in star; closed forms:
  // nearest is L1 distance one, star is Linf distance one.
  CounterRng rng{stream_key(11, 0), 0};
  for (int trial = 0; trial < 2000; ++trial) {
    Site a{(int)rng.next_below(11) - 5, (int)rng.next_below(11) - 5};
    Site b{(int)rng.next_below(11) - 5, (int)rng.next_below(11) - 5};
    for (Kind kind : {Kind::nearest, Kind::star}) {
      CHECK(adjacent(a, b, kind) == adjacent(b, a, kind));
      CHECK_FALSE(adjacent(a, a, kind));
    }
    if (adjacent(a, b, Kind::nearest)) CHECK(adjacent(a, b, Kind::star));
    const int dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
    CHECK(adjacent(a, b, Kind::nearest) == (dx + dy == 1));
    CHECK(adjacent(a, b, Kind::star) == (std::max(dx, dy) == 1));
  }

  CHECK(neighbor_offsets(Kind::nearest).size() == 4);
  CHECK(neighbor_offsets(Kind::star).size() == 8);
  CHECK(std::is_sorted(neighbor_offsets(Kind::star).begin(), neighbor_offsets(Kind::star).end()));
}

TEST_CASE("boundary of site sets") {
  const std::vector<Site> origin{{0, 0}};
  CHECK(boundary(origin, Kind::nearest) ==
        std::vector<Site>{{0, -1}, {-1, 0}, {1, 0}, {0, 1}});
  std::vector<Site> moore = ring_sites(1, {0, 0});
  CHECK(boundary(origin, Kind::star) == moore);

  // Random blobs against a direct comprehension over a window that
  // contains the blob's star expansion.
  CounterRng rng{stream_key(12, 0), 0};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Site> blob;
    for (int i = 0; i < 10; ++i)
      blob.push_back({(int)rng.next_below(7) - 3, (int)rng.next_below(7) - 3});
    blob = sorted_unique(std::move(blob));
    for (Kind kind : {Kind::nearest, Kind::star}) {
      std::vector<Site> expect;
      for (Site s : BoxRegion{5, {0, 0}}.sites()) {
        if (contains_site(blob, s)) continue;
        for (Site b : blob)
          if (adjacent(s, b, kind)) {
            expect.push_back(s);
            break;
          }
      }
      std::vector<Site> got = boundary(blob, kind);
      CHECK(got == expect);
      for (Site s : got) CHECK_FALSE(contains_site(blob, s));
    }
    std::vector<Site> near = boundary(blob, Kind::nearest);
    std::vector<Site> star = boundary(blob, Kind::star);
    CHECK(std::includes(star.begin(), star.end(), near.begin(), near.end()));
  }
}

TEST_CASE("ring sites and box boundaries") {
  CHECK(ring_sites(0, {2, -1}) == std::vector<Site>{{2, -1}});
  CHECK(ring_sites(1, {0, 0}).size() == 8);
  CHECK(ring_sites(3, {0, 0}).size() == 24);
  CHECK_THROWS_AS(ring_sites(-1, {0, 0}), std::invalid_argument);

  // The star boundary of a box is exactly the next ring out; the nearest
  // boundary misses the four corners.
  for (int d = 0; d <= 3; ++d) {
    const BoxRegion box{d, {1, 2}};
    CHECK(boundary(box.sites(), Kind::star) == ring_sites(d + 1, {1, 2}));
    std::vector<Site> near = boundary(box.sites(), Kind::nearest);
    CHECK((int)near.size() == (int)ring_sites(d + 1, {1, 2}).size() - 4);
  }
}

TEST_CASE("paths, circuits, and validation") {
  PathTrace p = row_path(0, 1);
  CHECK(p.sites == std::vector<Site>{{-2, 0}, {-1, 0}, {0, 0}, {1, 0}, {2, 0}});
  CHECK(row_path(3, 0).sites == std::vector<Site>{{-1, 3}, {0, 3}, {1, 3}});
  for (int h : {-2, 0, 5})
    for (int m : {0, 1, 4}) {
      PathTrace r = row_path(h, m);
      CHECK((int)r.sites.size() == 2 * m + 3);
      CHECK(is_path(r.sites, Kind::nearest));
      CHECK(is_self_avoiding(r.sites));
      for (Site s : r.sites) CHECK(s.y == h);
    }
  CHECK_THROWS_AS(row_path(0, -1), std::invalid_argument);

  // A single site is a path but never a circuit.
  const std::vector<Site> lone{{3, 3}};
  CHECK(is_path(lone, Kind::nearest));
  CHECK_FALSE(is_circuit(lone, Kind::star));

  // Two mutually adjacent sites close into a (degenerate) circuit.
  const std::vector<Site> pair{{0, 0}, {1, 0}};
  CHECK(is_circuit(pair, Kind::nearest));
  CHECK(is_self_avoiding_circuit(pair, Kind::nearest));
  CHECK(circuit_interior({pair, Kind::nearest}).empty());

  const std::vector<Site> triangle{{0, 0}, {1, 0}, {1, 1}};
  CHECK(is_self_avoiding_circuit(triangle, Kind::star));
  CHECK_FALSE(is_circuit(triangle, Kind::nearest));
  CHECK(circuit_interior({triangle, Kind::star}).empty());

  // Random sequences: validation must agree with the definition scan.
  CounterRng rng{stream_key(13, 0), 0};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Site> seq;
    const int len = 2 + (int)rng.next_below(6);
    for (int i = 0; i < len; ++i)
      seq.push_back({(int)rng.next_below(5) - 2, (int)rng.next_below(5) - 2});
    for (Kind kind : {Kind::nearest, Kind::star}) {
      bool path_ok = true;
      for (size_t i = 0; i + 1 < seq.size(); ++i)
        path_ok = path_ok && adjacent(seq[i], seq[i + 1], kind);
      CHECK(is_path(seq, kind) == path_ok);
      CHECK(is_circuit(seq, kind) == (path_ok && adjacent(seq.back(), seq.front(), kind)));
    }
    CHECK(is_self_avoiding(seq) == (sorted_unique(seq).size() == seq.size()));
  }
}

TEST_CASE("circuit interiors match the even-odd oracle") {
  const Circuit ring8{ring_sites(1, {0, 0}), Kind::star};
  // ring_sites is row-major, not cyclic; build the cyclic order by hand.
  const Circuit ring_cyclic{
      {{-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}}, Kind::star};
  CHECK(circuit_interior(ring_cyclic) == std::vector<Site>{{0, 0}});

  const Circuit diamond{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, Kind::star};
  CHECK(circuit_interior(diamond) == std::vector<Site>{{0, 0}});

  // Enumerated self-avoiding star circuits in a 5x5 box: interior equals
  // the even-odd scan site by site, the traversal direction does not
  // matter, and circuit/interior/exterior partition the window.
  const BoxRegion window{4, {0, 0}};
  int tested = 0, counter = 0;
  oracle::enumerate_cycles(BoxRegion{2, {0, 0}}.sites(), Kind::star,
                           [&](const std::vector<Site>& cyc) {
                             if (++counter % 997 != 0) return true;
                             ++tested;
                             const Circuit c{cyc, Kind::star};
                             std::vector<Site> in = circuit_interior(c);
                             CHECK(in == oracle::interior_sites(cyc, window));

                             std::vector<Site> rev(cyc.rbegin(), cyc.rend());
                             CHECK(circuit_interior({rev, Kind::star}) == in);

                             CircuitRegions regions = interior_exterior(c, window);
                             CHECK(regions.interior == in);
                             std::vector<Site> all = regions.interior;
                             all.insert(all.end(), regions.exterior.begin(),
                                        regions.exterior.end());
                             all.insert(all.end(), cyc.begin(), cyc.end());
                             CHECK(sorted_unique(std::move(all)) == window.sites());
                             return tested < 250;
                           });
  CHECK(tested == 250);

  const Circuit figure_eight{
      {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}, {-1, 0}, {-1, -1}, {0, -1}}, Kind::star};
  CHECK_THROWS_AS(circuit_interior(figure_eight), std::invalid_argument);
}

TEST_CASE("windows and annuli") {
  const BoxRegion box{2, {1, -1}};
  CHECK(box.side() == 5);
  CHECK(box.site_count() == 25);
  CHECK(box.contains({3, 1}));
  CHECK_FALSE(box.contains({4, 1}));
  CHECK(box.strictly_contains({1, -1}));
  CHECK_FALSE(box.strictly_contains({3, -1}));
  const std::vector<Site> box_sites = box.sites();
  CHECK(std::is_sorted(box_sites.begin(), box_sites.end()));

  Configuration cfg(box, 0);
  CHECK_THROWS_AS(cfg.spin({4, 0}), std::out_of_range);
  CHECK_THROWS_AS(cfg.set_spin({4, 0}, 1), std::out_of_range);
  CHECK_THROWS_AS(cfg.set_spin({1, -1}, 2), std::invalid_argument);
  cfg.set_spin({1, -1}, 1);
  CHECK(cfg.spin({1, -1}) == 1);
  Configuration other(box, 0);
  CHECK_FALSE(cfg == other);
  other.set_spin({1, -1}, 1);
  CHECK(cfg == other);

  const Annulus ann{BoxRegion{1, {0, 0}}, BoxRegion{4, {0, 0}}};
  CHECK(ann.contains({2, 0}));
  CHECK_FALSE(ann.contains({1, 1}));
  CHECK_FALSE(ann.contains({5, 0}));
  CHECK((long long)ann.sites().size() ==
        BoxRegion{4, {0, 0}}.site_count() - BoxRegion{1, {0, 0}}.site_count());
  const std::vector<Site> ann_sites = ann.sites();
  CHECK(std::is_sorted(ann_sites.begin(), ann_sites.end()));
  // The inner box plus its star boundary must fit strictly inside.
  CHECK_THROWS_AS((Annulus{BoxRegion{1, {0, 0}}, BoxRegion{2, {0, 0}}}), std::invalid_argument);
  CHECK_THROWS_AS((Annulus{BoxRegion{0, {3, 0}}, BoxRegion{3, {0, 0}}}), std::invalid_argument);
  CHECK_NOTHROW((Annulus{BoxRegion{0, {1, 0}}, BoxRegion{3, {0, 0}}}));
}
