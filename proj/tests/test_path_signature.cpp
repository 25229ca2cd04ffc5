#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sigsde/path_signature.hpp"
#include "sigsde/tensor_ops.hpp"
#include "test_util.hpp"

using namespace sigsde;
using sigsde::testutil::random_pl_path;
using sigsde::testutil::words_up_to;

namespace {

MultiIndex w(int d, std::initializer_list<int> letters) { return MultiIndex(d, letters); }

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Refines each segment of a piecewise-linear path into `sub` equal pieces.
// The geometric trace is unchanged, so the signature must not move.
DiscretePath refine(const DiscretePath& path, std::size_t sub) {
    const int d = path.dimension();
    std::vector<double> times, values;
    for (std::size_t k = 0; k + 1 < path.sample_count(); ++k) {
        for (std::size_t j = 0; j < sub; ++j) {
            double a = static_cast<double>(j) / static_cast<double>(sub);
            times.push_back(path.time(k) + a * (path.time(k + 1) - path.time(k)));
            for (int c = 0; c < d; ++c)
                values.push_back((1.0 - a) * path.value(k, c) + a * path.value(k + 1, c));
        }
    }
    times.push_back(path.end_time());
    auto last = path.point(path.sample_count() - 1);
    values.insert(values.end(), last.begin(), last.end());
    return DiscretePath(std::move(times), std::move(values), d);
}

} // namespace

TEST_CASE("add_time prepends the clock channel") {
    DiscretePath constant = DiscretePath::scalar({0.0, 1.0}, {2.5, 2.5});
    DiscretePath timed = add_time(constant);
    CHECK(timed.dimension() == 2);
    CHECK(timed.value(0, 0) == 0.0);
    CHECK(timed.value(1, 0) == 1.0);
    CHECK(timed.value(0, 1) == 2.5);
    CHECK(timed.value(1, 1) == 2.5);

    // Applying it twice duplicates the clock in channel 2; documented, allowed.
    DiscretePath twice = add_time(timed);
    CHECK(twice.dimension() == 3);
    CHECK(twice.value(1, 0) == twice.value(1, 1));

    std::mt19937_64 rng(7);
    DiscretePath brownian = random_pl_path(rng, 1, 64);
    DiscretePath augmented = add_time(brownian);
    for (std::size_t i = 0; i < augmented.sample_count(); ++i)
        CHECK(augmented.value(i, 0) == brownian.time(i));
}

TEST_CASE("lead-lag of a single up-move") {
    DiscretePath step = DiscretePath::scalar({0.0, 1.0}, {0.0, 1.0});
    DiscretePath ll = lead_lag(step);
    REQUIRE(ll.sample_count() == 3);
    REQUIRE(ll.dimension() == 2);
    // nodes (0,0), (0,1), (1,1): lag first, lead second
    CHECK(ll.value(0, 0) == 0.0);
    CHECK(ll.value(0, 1) == 0.0);
    CHECK(ll.value(1, 0) == 0.0);
    CHECK(ll.value(1, 1) == 1.0);
    CHECK(ll.value(2, 0) == 1.0);
    CHECK(ll.value(2, 1) == 1.0);

    Signature sig = path_signature(ll, 2);
    // Hand integration over the two segments: the lag is flat while the lead
    // rises, so the (1,2) area vanishes and (2,1) collects the full square.
    CHECK(sig.coefficient(w(2, {1, 2})) == doctest::Approx(0.0));
    CHECK(sig.coefficient(w(2, {2, 1})) == doctest::Approx(1.0));
}

TEST_CASE("lead-lag of a constant path is constant") {
    DiscretePath flat = DiscretePath::scalar({0.0, 0.5, 1.0}, {1.0, 1.0, 1.0});
    DiscretePath ll = lead_lag(flat);
    Signature sig = path_signature(ll, 3);
    CHECK(sig.coefficient(MultiIndex::empty(2)) == 1.0);
    CHECK(sig.coefficients.term_count() == 1);
}

TEST_CASE("lag block of the lead-lag path retraces the original polyline") {
    std::mt19937_64 rng(11);
    DiscretePath path = random_pl_path(rng, 2, 20);
    DiscretePath ll = lead_lag(path);
    CHECK(ll.sample_count() == 2 * path.segment_count() + 1);
    // the lag block visits exactly the original nodes, each twice in a row
    for (std::size_t k = 0; k < path.sample_count(); ++k) {
        for (int c = 0; c < 2; ++c) {
            CHECK(ll.value(2 * k, c) == path.value(k, c));
            if (2 * k + 1 < ll.sample_count()) CHECK(ll.value(2 * k + 1, c) == path.value(k, c));
        }
    }
    CHECK_THROWS_AS(lead_lag(DiscretePath::scalar({0.0}, {1.0})), std::invalid_argument);
}

TEST_CASE("segment signature is the increment exponential") {
    std::vector<double> unit{1.0};
    Signature s = segment_signature(unit, 3);
    CHECK(s.coefficient(MultiIndex::empty(1)) == 1.0);
    CHECK(s.coefficient(w(1, {1})) == 1.0);
    CHECK(s.coefficient(w(1, {1, 1})) == doctest::Approx(0.5));
    CHECK(s.coefficient(w(1, {1, 1, 1})) == doctest::Approx(1.0 / 6.0));

    std::vector<double> zero{0.0, 0.0};
    Signature z = segment_signature(zero, 4);
    CHECK(z.coefficients.term_count() == 1);
    CHECK(z.coefficient(MultiIndex::empty(2)) == 1.0);

    // coefficient of (1,2) on a straight segment is a*b/2 (double integral
    // over the ordered triangle)
    std::vector<double> ab{0.7, -1.3};
    Signature g = segment_signature(ab, 2);
    CHECK(g.coefficient(w(2, {1, 2})) == doctest::Approx(0.7 * -1.3 / 2.0));
    CHECK(g.coefficient(w(2, {2, 1})) == doctest::Approx(0.7 * -1.3 / 2.0));
}

TEST_CASE("chen concatenation: neutral element and collinear merge") {
    std::vector<double> delta{0.4, -0.2, 0.9};
    Signature s = segment_signature(delta, 4);
    Signature id = identity_signature(3, 4);
    CHECK(chen_concat(s, id).coefficients == s.coefficients);
    CHECK(chen_concat(id, s).coefficients == s.coefficients);

    std::vector<double> twice{0.8, -0.4, 1.8};
    Signature merged = chen_concat(s, s);
    Signature direct = segment_signature(twice, 4);
    for (const auto& [word, c] : direct.coefficients.terms())
        CHECK(merged.coefficient(word) == doctest::Approx(c).epsilon(1e-13));
}

TEST_CASE("chen concatenation is associative on random segments") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> gauss(0.0, 0.8);
    for (int rep = 0; rep < 25; ++rep) {
        std::vector<double> da{gauss(rng), gauss(rng)};
        std::vector<double> db{gauss(rng), gauss(rng)};
        std::vector<double> dc{gauss(rng), gauss(rng)};
        Signature a = segment_signature(da, 4);
        Signature b = segment_signature(db, 4);
        Signature c = segment_signature(dc, 4);
        Signature left = chen_concat(chen_concat(a, b), c);
        Signature right = chen_concat(a, chen_concat(b, c));
        for (const auto& [word, coef] : left.coefficients.terms())
            CHECK(coef == doctest::Approx(right.coefficient(word)).epsilon(1e-12));
    }
}

TEST_CASE("path signature: repeated-letter coordinate is half the squared increment") {
    std::mt19937_64 rng(17);
    DiscretePath path = random_pl_path(rng, 2, 50);
    Signature sig = path_signature(path, 2);
    const double dx2 = path.value(path.sample_count() - 1, 1) - path.value(0, 1);
    CHECK(sig.coefficient(w(2, {2, 2})) == doctest::Approx(0.5 * dx2 * dx2).epsilon(1e-12));
}

TEST_CASE("path signature of the linear clock path") {
    DiscretePath line = DiscretePath::scalar({0.0, 0.25, 0.5, 1.0}, {0.0, 0.25, 0.5, 1.0});
    Signature sig = path_signature(line, 3);
    CHECK(sig.coefficient(w(1, {1})) == doctest::Approx(1.0));
    CHECK(sig.coefficient(w(1, {1, 1})) == doctest::Approx(0.5));
    CHECK(sig.coefficient(w(1, {1, 1, 1})) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("shuffle identity on random paths") {
    std::mt19937_64 rng(19);
    for (int d : {2, 3}) {
        auto words = words_up_to(d, 3);
        for (int rep = 0; rep < 8; ++rep) {
            DiscretePath path = random_pl_path(rng, d, 30);
            Signature sig = path_signature(path, 5);
            for (const auto& lhs : words) {
                for (const auto& rhs : words) {
                    if (lhs.length() + rhs.length() > 5) continue;
                    double product = sig.coefficient(lhs) * sig.coefficient(rhs);
                    double merged = pair(shuffle(lhs, rhs), sig.coefficients);
                    CHECK(std::abs(merged - product) <= 1e-9 * (1.0 + std::abs(product)));
                }
            }
        }
    }
}

TEST_CASE("reparametrizing node times leaves the signature untouched") {
    std::mt19937_64 rng(23);
    DiscretePath path = random_pl_path(rng, 2, 40);
    std::vector<double> warped(path.times());
    const double horizon = path.end_time();
    for (double& t : warped) t = horizon * std::pow(t / horizon, 1.7); // monotone warp
    DiscretePath same_trace(std::move(warped), std::vector<double>(path.values()), 2);

    Signature a = path_signature(path, 4);
    Signature b = path_signature(same_trace, 4);
    for (const auto& [word, c] : a.coefficients.terms())
        CHECK(std::abs(b.coefficient(word) - c) <= 1e-12 * (1.0 + std::abs(c)));
}

TEST_CASE("flow property: split-point concatenation is exact") {
    std::mt19937_64 rng(29);
    for (int rep = 0; rep < 10; ++rep) {
        DiscretePath path = random_pl_path(rng, 2, 24);
        std::uniform_int_distribution<std::size_t> cut(1, path.sample_count() - 2);
        const std::size_t mid = cut(rng);

        auto slice = [&](std::size_t from, std::size_t to) {
            std::vector<double> t(path.times().begin() + from, path.times().begin() + to + 1);
            std::vector<double> v(path.values().begin() + 2 * from,
                                  path.values().begin() + 2 * (to + 1));
            return DiscretePath(std::move(t), std::move(v), 2);
        };
        Signature whole = path_signature(path, 4);
        Signature glued = chen_concat(path_signature(slice(0, mid), 4),
                                      path_signature(slice(mid, path.sample_count() - 1), 4));
        for (const auto& [word, c] : whole.coefficients.terms())
            CHECK(std::abs(glued.coefficient(word) - c) <= 1e-12 * (1.0 + std::abs(c)));
    }
}

TEST_CASE("refining the polyline does not move the signature") {
    std::mt19937_64 rng(31);
    DiscretePath path = random_pl_path(rng, 3, 12);
    Signature coarse = path_signature(path, 4);
    Signature fine = path_signature(refine(path, 7), 4);
    for (const auto& [word, c] : coarse.coefficients.terms())
        CHECK(fine.coefficient(word) == doctest::Approx(c).epsilon(1e-11));
}

TEST_CASE("factorial decay of signature levels") {
    std::mt19937_64 rng(37);
    for (int rep = 0; rep < 10; ++rep) {
        const int d = 1 + static_cast<int>(rng() % 3);
        DiscretePath path = random_pl_path(rng, d, 16, 1.0, 0.8);
        const double tv = path.total_variation();
        Signature sig = path_signature(path, 8);
        for (const auto& [word, c] : sig.coefficients.terms()) {
            const int n = static_cast<int>(word.length());
            CHECK(std::abs(c) <=
                  std::pow(tv, n) / factorial(n) * (1.0 + 1e-10) + 1e-300);
        }
    }
}

TEST_CASE("lead-lag area captures the quadratic variation") {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 10; ++rep) {
        DiscretePath path = random_pl_path(rng, 1, 32);
        double qv = 0.0;
        for (std::size_t k = 1; k < path.sample_count(); ++k) {
            double dz = path.value(k, 0) - path.value(k - 1, 0);
            qv += dz * dz;
        }
        Signature sig = path_signature(lead_lag(path), 2);
        double area = sig.coefficient(w(2, {2, 1})) - sig.coefficient(w(2, {1, 2}));
        CHECK(area == doctest::Approx(qv).epsilon(1e-10));
    }
}

TEST_CASE("half-shuffle pairing reproduces the integral of one coordinate against another") {
    // <F > G, sig> must equal the Stratonovich integral of <F,sig_{0,u}>
    // against d<G,sig_{0,u}>; checked by trapezoidal quadrature on a finely
    // resampled polyline. The antisymmetric half reproduces the area swept by
    // the derived curve u -> (<F,sig>, <G,sig>).
    std::mt19937_64 rng(43);
    DiscretePath base = random_pl_path(rng, 2, 60, 1.0, 0.9);
    DiscretePath fine = refine(base, 300);

    LinearFunctional f = LinearFunctional::monomial(w(2, {1, 2}), 1.0);
    LinearFunctional g = LinearFunctional::monomial(w(2, {2, 1}), 1.0);

    std::vector<double> x, y;
    x.reserve(fine.sample_count());
    y.reserve(fine.sample_count());
    path_signature_scan(fine, 4, [&](std::size_t, const DenseTensor& running) {
        x.push_back(running.coefficient(w(2, {1, 2})));
        y.push_back(running.coefficient(w(2, {2, 1})));
    });

    double int_x_dy = 0.0, int_y_dx = 0.0;
    for (std::size_t k = 1; k < x.size(); ++k) {
        int_x_dy += 0.5 * (x[k] + x[k - 1]) * (y[k] - y[k - 1]);
        int_y_dx += 0.5 * (y[k] + y[k - 1]) * (x[k] - x[k - 1]);
    }

    Signature sig = path_signature(base, 4);
    const double forward = pair(half_shuffle(f, g), sig.coefficients);
    const double backward = pair(half_shuffle(g, f), sig.coefficients);
    CHECK(forward == doctest::Approx(int_x_dy).epsilon(2e-5));
    CHECK(backward == doctest::Approx(int_y_dx).epsilon(2e-5));

    const double area = 0.5 * (forward - backward);
    const double quadrature_area = 0.5 * (int_x_dy - int_y_dx);
    CHECK(area == doctest::Approx(quadrature_area).epsilon(5e-5));
}

TEST_CASE("level-one half-shuffles give the classical area") {
    std::mt19937_64 rng(47);
    DiscretePath path = random_pl_path(rng, 2, 50, 1.0, 1.1);
    Signature sig = path_signature(path, 2);
    LinearFunctional f = LinearFunctional::monomial(w(2, {1}), 1.0);
    LinearFunctional g = LinearFunctional::monomial(w(2, {2}), 1.0);
    double antisym =
        0.5 * (pair(half_shuffle(f, g), sig.coefficients) -
               pair(half_shuffle(g, f), sig.coefficients));
    double level2 = 0.5 * (sig.coefficient(w(2, {1, 2})) - sig.coefficient(w(2, {2, 1})));
    CHECK(antisym == doctest::Approx(level2).epsilon(1e-12));
}
