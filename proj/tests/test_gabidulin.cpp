#include <algorithm>

#include "doctest.h"
#include "pusnec/gabidulin.hpp"
#include "pusnec/linpoly.hpp"

using namespace pusnec;

namespace {

// random full-rank rows over F_q
FqMat random_full_rank(const Field& f, int rows, int cols, Rng& rng) {
    for (;;) {
        FqMat m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(i, j) = static_cast<uint16_t>(rng.below(f.q()));
        if (fq_rank(f.ground(), m) == rows) return m;
    }
}

// stack B below Bhat and require joint full rank
std::pair<FqMat, FqMat> random_errata_locations(const Field& f, int tau, int rho, int n0, Rng& rng) {
    for (;;) {
        FqMat joint = random_full_rank(f, tau + rho, n0, rng);
        FqMat b(tau, n0), bh(rho, n0);
        for (int i = 0; i < tau; ++i)
            for (int j = 0; j < n0; ++j) b.at(i, j) = joint.at(i, j);
        for (int i = 0; i < rho; ++i)
            for (int j = 0; j < n0; ++j) bh.at(i, j) = joint.at(tau + i, j);
        return {b, bh};
    }
}

// corrupt a received word in place: values times location rows
void apply_errata(const Field& f, ExtMat& word, const FqMat& rows, const std::vector<std::vector<Elem>>& values) {
    for (int comp = 0; comp < word.rows; ++comp)
        for (int j = 0; j < rows.rows; ++j)
            for (int v = 0; v < word.cols; ++v) {
                uint16_t c = rows.at(j, v);
                if (c) word.at(comp, v) = f.add(word.at(comp, v), f.scale(values[static_cast<size_t>(comp)][static_cast<size_t>(j)], c));
            }
}

int rank_over_fq(const Field& f, const ExtMat& m) {
    FqMat flat(m.rows * f.n(), m.cols);
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c)
            for (int i = 0; i < f.n(); ++i) flat.at(r * f.n() + i, c) = m.at(r, c).c[i];
    return fq_rank(f.ground(), flat);
}

}  // namespace

TEST_CASE("generator and parity-check matrices") {
    Codec codec = Codec::make(*find_codec("gab9-3"));
    const Field& f = codec.field();
    ExtMat g = codec.g_full();
    ExtMat h = codec.h_mat();
    for (int i = 0; i < g.rows; ++i)
        for (int j = 0; j < h.rows; ++j) {
            Elem acc = f.zero();
            for (int v = 0; v < g.cols; ++v) acc = f.add(acc, f.mul(g.at(i, v), h.at(j, v)));
            CHECK(f.is_zero(acc));
        }
    CHECK(ext_rank(f, codec.g1()) == codec.spec().k);
    for (const CodecSpec& s : codec_registry()) {
        Codec c = Codec::make(s);
        CHECK(ext_rank(c.field(), c.g1()) == s.k);
    }
    // tiny hand oracle: n=2, k=1 over F_4
    Codec tiny(full_length_spec(1, 2, 1, 1), Field::build(1, 2));
    ExtMat tg = tiny.g_full();
    CHECK(tg.at(0, 0) == tiny.field().basis_elem(0));
    CHECK(tg.at(0, 1) == tiny.field().basis_elem(1));
    ExtMat th = tiny.h_mat();
    CHECK(th.at(0, 0) == tiny.field().basis_elem(1));
    CHECK(th.at(0, 1) == tiny.field().basis_elem(0));
}

TEST_CASE("pre-encode: GRA against the dense inverse oracle") {
    Codec codec = Codec::make(*find_codec("gab9-3"));
    const Field& f = codec.field();
    const CodecSpec& sp = codec.spec();
    ExtMat g1 = codec.g1();
    ExtMat g1inv = *ext_inverse(f, g1);
    Rng rng(77, 0);
    for (int trial = 0; trial < 200; ++trial) {
        ExtMat u = codec.random_message(rng);
        ExtMat r = codec.random_mask(rng);
        ExtMat fc = codec.pre_encode(u, r);
        // oracle: [u r] * G1^{-1}
        for (int comp = 0; comp < sp.l; ++comp) {
            for (int j = 0; j < sp.k; ++j) {
                Elem acc = f.zero();
                for (int i = 0; i < sp.k; ++i) {
                    const Elem& ui = i < sp.k0 ? u.at(comp, i) : r.at(comp, i - sp.k0);
                    acc = f.add(acc, f.mul(ui, g1inv.at(i, j)));
                }
                CHECK(fc.at(comp, j) == acc);
            }
            // roundtrip: f * G1 = [u r]
            for (int j = 0; j < sp.k; ++j) {
                Elem acc = f.zero();
                for (int i = 0; i < sp.k; ++i) acc = f.add(acc, f.mul(fc.at(comp, i), g1.at(i, j)));
                const Elem& expect = j < sp.k0 ? u.at(comp, j) : r.at(comp, j - sp.k0);
                CHECK(acc == expect);
            }
        }
    }
    ExtMat zu(sp.l, sp.k0), zr(sp.l, sp.mu0);
    ExtMat zf = codec.pre_encode(zu, zr);
    for (const Elem& e : zf.data) CHECK(f.is_zero(e));
}

TEST_CASE("encode: withheld prefix structure") {
    // k1 = k0 = 1 on gab6-3: x' = [u x]
    Codec codec = Codec::make(*find_codec("gab6-3"));
    const CodecSpec& sp = codec.spec();
    REQUIRE(sp.k1 == sp.k0);
    Rng rng(99, 0);
    ExtMat u = codec.random_message(rng);
    ExtMat r = codec.random_mask(rng);
    ExtMat fc = codec.pre_encode(u, r);
    ExtMat full = codec.encode_full(fc);
    ExtMat outer = codec.encode(fc);
    for (int comp = 0; comp < sp.l; ++comp) {
        for (int j = 0; j < sp.k0; ++j) CHECK(full.at(comp, j) == u.at(comp, j));
        for (int v = 0; v < sp.n0; ++v) CHECK(full.at(comp, sp.k1 + v) == outer.at(comp, v));
    }
    // gab9-3 (k1 = 4 > k0 = 3, mu0 = 0): x' = [u rR x] with rR emergent
    Codec c93 = Codec::make(*find_codec("gab9-3"));
    ExtMat u93 = c93.random_message(rng);
    ExtMat full93 = c93.encode_full(c93.pre_encode(u93, ExtMat(c93.spec().l, 0)));
    for (int comp = 0; comp < c93.spec().l; ++comp)
        for (int j = 0; j < c93.spec().k0; ++j) CHECK(full93.at(comp, j) == u93.at(comp, j));
}

TEST_CASE("exhaustive tiny code is MRD") {
    // full length n=3, k=1 over F_8: minimum rank distance = n - k + 1 = 3
    Codec codec(full_length_spec(1, 3, 1, 1), Field::build(1, 3));
    const Field& f = codec.field();
    std::vector<ExtMat> words;
    for (uint32_t v = 0; v < 8; ++v) {
        ExtMat fc(1, 1);
        fc.at(0, 0).c[0] = v & 1;
        fc.at(0, 0).c[1] = (v >> 1) & 1;
        fc.at(0, 0).c[2] = (v >> 2) & 1;
        words.push_back(codec.encode(fc));
    }
    int min_dist = 3;
    for (size_t i = 0; i < words.size(); ++i)
        for (size_t j = i + 1; j < words.size(); ++j) {
            ExtMat diff(1, 3);
            for (int v = 0; v < 3; ++v) diff.at(0, v) = f.add(words[i].at(0, v), words[j].at(0, v));
            min_dist = std::min(min_dist, rank_over_fq(f, diff));
        }
    CHECK(min_dist == 3);

    // punctured to n0 = 2 columns, rank distance >= n0 - k + 1 = 2
    CodecSpec punct = full_length_spec(1, 3, 1, 1);
    punct.n0 = 2;
    punct.k1 = 1;
    punct.k0 = 1;
    punct.mu0 = 0;
    Codec pc(punct, Field::build(1, 3));
    int pmin = 2;
    for (uint32_t a = 0; a < 8; ++a)
        for (uint32_t b = a + 1; b < 8; ++b) {
            ExtMat fa(1, 1), fb(1, 1);
            fa.at(0, 0).c[0] = a & 1;
            fa.at(0, 0).c[1] = (a >> 1) & 1;
            fa.at(0, 0).c[2] = (a >> 2) & 1;
            fb.at(0, 0).c[0] = b & 1;
            fb.at(0, 0).c[1] = (b >> 1) & 1;
            fb.at(0, 0).c[2] = (b >> 2) & 1;
            ExtMat xa = pc.encode(fa), xb = pc.encode(fb);
            ExtMat diff(1, 2);
            for (int v = 0; v < 2; ++v) diff.at(0, v) = pc.field().add(xa.at(0, v), xb.at(0, v));
            pmin = std::min(pmin, rank_over_fq(pc.field(), diff));
        }
    CHECK(pmin == 2);
}

TEST_CASE("lbma: trivial and single-pair sequences, operation bounds") {
    Field f = Field::build(8, 9);
    const int nk = 6;
    // all-zero input -> length-0 register
    std::vector<Elem> zeros(static_cast<size_t>(nk), f.zero());
    CHECK(lbma(f, zeros).degree() == 0);

    Rng rng(123, 0);
    for (int trial = 0; trial < 50; ++trial) {
        // sequence from tau independent (a_j, d_j) pairs: s_i = sum a_j d_j^[i]
        int tau = 1 + static_cast<int>(rng.below(3));
        std::vector<Elem> a, d;
        FqMat dm = random_full_rank(f, tau, f.n(), rng);
        FqMat am = random_full_rank(f, tau, f.n(), rng);
        for (int j = 0; j < tau; ++j) {
            Elem e1, e2;
            for (int i = 0; i < f.n(); ++i) {
                e1.c[i] = dm.at(j, i);
                e2.c[i] = am.at(j, i);
            }
            d.push_back(e1);
            a.push_back(e2);
        }
        // reversed-syndrome form: s_i = sum_j d_j a_j^[i]; the register's
        // rootspace is spanned by the d_j
        std::vector<Elem> syn(static_cast<size_t>(nk), f.zero());
        for (int i = 0; i < nk; ++i)
            for (int j = 0; j < tau; ++j) syn[static_cast<size_t>(i)] = f.add(syn[static_cast<size_t>(i)], f.mul(d[static_cast<size_t>(j)], f.qpow(a[static_cast<size_t>(j)], i)));

        OpCounts before = op_counts();
        LinPoly elp = lbma(f, syn);
        OpCounts after = op_counts();
        CHECK(elp.degree() == tau);
        // connection property: sum_v f_v s_{i-v}^[v] = 0 for i = tau..nk-1
        for (int i = tau; i < nk; ++i) {
            Elem acc = f.zero();
            for (int v = 0; v <= tau; ++v)
                acc = f.add(acc, f.mul(elp.coeffs[static_cast<size_t>(v)], f.qpow(syn[static_cast<size_t>(i - v)], v)));
            CHECK(f.is_zero(acc));
        }
        // roots of the register are the d_j (ELP reading of the sequence)
        for (int j = 0; j < tau; ++j) CHECK(f.is_zero(lin_eval(f, elp, d[static_cast<size_t>(j)])));
        uint64_t muls = after.mul - before.mul;
        uint64_t bound = 2 * tau == nk ? static_cast<uint64_t>(2 * tau * tau) : static_cast<uint64_t>(nk) * tau;
        CHECK(muls <= bound);
    }
}

TEST_CASE("gra: single equation, dense-solve oracle, operation count") {
    Field f = Field::build(8, 9);
    Rng rng(321, 0);
    // tau = 1
    {
        Elem z = f.random_nonzero(rng), s = f.random_elem(rng);
        std::vector<Elem> x = gra(f, {z}, {s});
        CHECK(f.mul(z, x[0]) == s);
    }
    for (int trial = 0; trial < 1000; ++trial) {
        int tau = 1 + static_cast<int>(rng.below(5));
        FqMat zm = random_full_rank(f, tau, f.n(), rng);
        std::vector<Elem> z(static_cast<size_t>(tau));
        for (int j = 0; j < tau; ++j)
            for (int i = 0; i < f.n(); ++i) z[static_cast<size_t>(j)].c[i] = zm.at(j, i);
        std::vector<Elem> s(static_cast<size_t>(tau));
        for (Elem& e : s) e = f.random_elem(rng);

        OpCounts before = op_counts();
        std::vector<Elem> x = gra(f, z, s);
        OpCounts after = op_counts();
        // verify s_i = sum_j z_j x_j^[i]
        for (int i = 0; i < tau; ++i) {
            Elem acc = f.zero();
            for (int j = 0; j < tau; ++j) acc = f.add(acc, f.mul(z[static_cast<size_t>(j)], f.qpow(x[static_cast<size_t>(j)], i)));
            CHECK(acc == s[static_cast<size_t>(i)]);
        }
        // dense oracle: solve the reversed linearized-Vandermonde system by
        // Gauss-Jordan over F_{q^n}
        ExtMat mat(tau, tau);
        for (int i = 0; i < tau; ++i)
            for (int j = 0; j < tau; ++j) mat.at(i, j) = f.qpow(z[static_cast<size_t>(j)], i - tau + 1);
        ExtMat minv = *ext_inverse(f, mat);
        for (int j = 0; j < tau; ++j) {
            Elem acc = f.zero();
            for (int i = 0; i < tau; ++i)
                acc = f.add(acc, f.mul(minv.at(j, i), f.qpow(s[static_cast<size_t>(tau - 1 - i)], i - tau + 1)));
            CHECK(acc == x[static_cast<size_t>(j)]);
        }
        if (tau >= 2) {
            uint64_t muls = after.mul - before.mul;
            uint64_t expect = static_cast<uint64_t>(3 * tau * tau + tau - 2) / 2;  // 3/2 tau^2 + tau/2 - 1
            CHECK(muls == expect);
        }
    }
    // dependent locations
    Elem z0 = f.random_nonzero(rng);
    CHECK_THROWS_AS(gra(f, {z0, f.scale(z0, 3)}, {f.random_elem(rng), f.random_elem(rng)}), SingularSystem);
}

TEST_CASE("shared gra equals per-component gra") {
    Field f = Field::build(8, 9);
    Rng rng(555, 0);
    for (int trial = 0; trial < 100; ++trial) {
        int tau = 1 + static_cast<int>(rng.below(4));
        FqMat zm = random_full_rank(f, tau, f.n(), rng);
        std::vector<Elem> z(static_cast<size_t>(tau));
        for (int j = 0; j < tau; ++j)
            for (int i = 0; i < f.n(); ++i) z[static_cast<size_t>(j)].c[i] = zm.at(j, i);
        SharedGraTables tables = shared_gra_precompute(f, z);
        for (int comp = 0; comp < 3; ++comp) {
            std::vector<Elem> s(static_cast<size_t>(tau));
            for (Elem& e : s) e = f.random_elem(rng);
            CHECK(shared_gra_solve(f, tables, s) == gra(f, z, s));
        }
        // zero syndromes give zero values
        std::vector<Elem> zs(static_cast<size_t>(tau), f.zero());
        for (const Elem& e : shared_gra_solve(f, tables, zs)) CHECK(f.is_zero(e));
    }
}

TEST_CASE("cps_lbma component behavior") {
    Field f = Field::build(8, 9);
    const int nk = 6;
    Rng rng(777, 0);
    auto make_syndromes = [&](const std::vector<Elem>& a, const std::vector<Elem>& d) {
        // reversed-syndrome form: register roots span the d_j
        std::vector<Elem> syn(static_cast<size_t>(nk), f.zero());
        for (int i = 0; i < nk; ++i)
            for (size_t j = 0; j < d.size(); ++j)
                syn[static_cast<size_t>(i)] = f.add(syn[static_cast<size_t>(i)], f.mul(d[j], f.qpow(a[j], i)));
        return syn;
    };
    for (int trial = 0; trial < 40; ++trial) {
        FqMat dm = random_full_rank(f, 2, f.n(), rng);
        Elem d0, d1;
        for (int i = 0; i < f.n(); ++i) {
            d0.c[i] = dm.at(0, i);
            d1.c[i] = dm.at(1, i);
        }
        Elem a0 = f.random_nonzero(rng), a1 = f.random_nonzero(rng);

        // identical errors in all components: modified syndromes vanish
        std::vector<Elem> s0 = make_syndromes({a0}, {d0});
        LinPoly same = cps_lbma(f, {s0, s0, s0});
        CHECK(same.degree() == 1);
        CHECK(f.is_zero(lin_eval(f, same, d0)));

        // error in component 1 only: degrees add, both roots present
        std::vector<Elem> quiet(static_cast<size_t>(nk), f.zero());
        std::vector<Elem> s1 = make_syndromes({a1}, {d1});
        LinPoly two = cps_lbma(f, {s0, quiet, s1});
        CHECK(two.degree() == 2);
        CHECK(f.is_zero(lin_eval(f, two, d0)));
        CHECK(f.is_zero(lin_eval(f, two, d1)));

        // l = 1 equals plain lbma
        CHECK(cps_lbma(f, {s0}).coeffs == lbma(f, s0).coeffs);
    }
}

TEST_CASE("decode: clean roundtrip on the registry presets") {
    Rng rng(1001, 0);
    for (const CodecSpec& sp : codec_registry()) {
        Codec codec = Codec::make(sp);
        for (int trial = 0; trial < 20; ++trial) {
            ExtMat u = codec.random_message(rng);
            ExtMat r = codec.random_mask(rng);
            ExtMat x = codec.encode(codec.pre_encode(u, r));
            DecodeOutput d = codec.decode(x, FqMat(0, sp.n0));
            REQUIRE(d.ok());
            CHECK(d.u == u);
            CHECK(d.r == r);
            CHECK(d.tau == 0);
        }
    }
}

TEST_CASE("decode: full errata sweep within capability") {
    CodecSpec sp = full_length_spec(8, 9, 3, 3);
    Codec codec = Codec::make(sp);
    const Field& f = codec.field();
    Rng rng(2024, 0);
    const int cap = sp.capability();
    REQUIRE(cap == 6);
    for (int tau = 0; 2 * tau <= cap; ++tau) {
        for (int rho = 0; 2 * tau + rho <= cap; ++rho) {
            for (int trial = 0; trial < 25; ++trial) {
                ExtMat u = codec.random_message(rng);
                ExtMat r = codec.random_mask(rng);
                ExtMat y = codec.encode(codec.pre_encode(u, r));
                auto [b, bh] = random_errata_locations(f, tau, rho, sp.n0, rng);
                std::vector<std::vector<Elem>> av(static_cast<size_t>(sp.l), std::vector<Elem>(static_cast<size_t>(tau))),
                    ahv(static_cast<size_t>(sp.l), std::vector<Elem>(static_cast<size_t>(rho)));
                for (int comp = 0; comp < sp.l; ++comp) {
                    for (int j = 0; j < tau; ++j) av[static_cast<size_t>(comp)][static_cast<size_t>(j)] = f.random_elem(rng);
                    for (int j = 0; j < rho; ++j) ahv[static_cast<size_t>(comp)][static_cast<size_t>(j)] = f.random_elem(rng);
                }
                apply_errata(f, y, b, av);
                apply_errata(f, y, bh, ahv);
                DecodeOutput d = codec.decode(y, bh);
                REQUIRE_MESSAGE(d.ok(), "tau=", tau, " rho=", rho, " reason=", d.reason);
                CHECK(d.u == u);
                CHECK(d.r == r);
            }
        }
    }
}

TEST_CASE("decode: erasures on distribution presets with withheld prefix") {
    Codec codec = Codec::make(*find_codec("gab9-3"));  // n0 = 5, cap 2
    const Field& f = codec.field();
    const CodecSpec& sp = codec.spec();
    Rng rng(31337, 0);
    for (int trial = 0; trial < 50; ++trial) {
        ExtMat u = codec.random_message(rng);
        ExtMat r = codec.random_mask(rng);
        ExtMat y = codec.encode(codec.pre_encode(u, r));
        int tau = static_cast<int>(rng.below(2));
        int rho = tau == 1 ? 0 : static_cast<int>(rng.below(3));
        auto [b, bh] = random_errata_locations(f, tau, rho, sp.n0, rng);
        std::vector<std::vector<Elem>> av(static_cast<size_t>(sp.l), std::vector<Elem>(static_cast<size_t>(tau))),
            ahv(static_cast<size_t>(sp.l), std::vector<Elem>(static_cast<size_t>(rho)));
        for (int comp = 0; comp < sp.l; ++comp) {
            for (int j = 0; j < tau; ++j) av[static_cast<size_t>(comp)][static_cast<size_t>(j)] = f.random_elem(rng);
            for (int j = 0; j < rho; ++j) ahv[static_cast<size_t>(comp)][static_cast<size_t>(j)] = f.random_elem(rng);
        }
        apply_errata(f, y, b, av);
        apply_errata(f, y, bh, ahv);
        DecodeOutput d = codec.decode(y, bh);
        REQUIRE(d.ok());
        CHECK(d.u == u);
        CHECK(d.r == r);
    }
    // dependent erasure locations are rejected
    FqMat dep(2, sp.n0);
    dep.at(0, 0) = 1;
    dep.at(1, 0) = 1;
    ExtMat x = codec.encode(codec.pre_encode(codec.random_message(rng), codec.random_mask(rng)));
    CHECK(codec.decode(x, dep).status == DecodeOutput::Status::invalid_erasures);
}

TEST_CASE("decode: beyond capability never silently wrong") {
    CodecSpec sp = full_length_spec(8, 9, 3, 3);
    Codec codec = Codec::make(sp);
    const Field& f = codec.field();
    Rng rng(4242, 0);
    int failures = 0;
    for (int trial = 0; trial < 300; ++trial) {
        ExtMat u = codec.random_message(rng);
        ExtMat y = codec.encode(codec.pre_encode(u, ExtMat(sp.l, 0)));
        int tau = 4 + static_cast<int>(rng.below(3));  // 2*tau > 6
        auto [b, bh] = random_errata_locations(f, tau, 0, sp.n0, rng);
        (void)bh;
        std::vector<std::vector<Elem>> av(static_cast<size_t>(sp.l), std::vector<Elem>(static_cast<size_t>(tau)));
        for (auto& row : av)
            for (Elem& e : row) e = f.random_elem(rng);
        apply_errata(f, y, b, av);
        DecodeOutput d = codec.decode(y, FqMat(0, sp.n0));
        if (!d.ok()) {
            ++failures;
            continue;
        }
        CHECK(d.u == u);  // a silent wrong answer would fail here
    }
    CHECK(failures > 250);  // overwhelming majority must be flagged
}

TEST_CASE("interleaving beyond the half-distance threshold: constructed pattern") {
    // tau = 4 > floor((n-k)/2) with the error values spread so each
    // component sees a distinct low-rank slice; CPSLBMA accumulates the
    // full locator across components
    CodecSpec sp = full_length_spec(8, 9, 3, 3);
    Codec codec = Codec::make(sp);
    const Field& f = codec.field();
    Rng rng(5150, 0);
    int decoded = 0;
    for (int trial = 0; trial < 20; ++trial) {
        ExtMat u = codec.random_message(rng);
        ExtMat y = codec.encode(codec.pre_encode(u, ExtMat(sp.l, 0)));
        const int tau = 4;  // <= l(n-k)/(l+1) = 4.5
        auto [b, bh] = random_errata_locations(f, tau, 0, sp.n0, rng);
        (void)bh;
        // component i carries errors only at locations {i, 3}: rank <= 2 each
        std::vector<std::vector<Elem>> av(static_cast<size_t>(sp.l), std::vector<Elem>(static_cast<size_t>(tau), f.zero()));
        for (int comp = 0; comp < sp.l; ++comp) {
            av[static_cast<size_t>(comp)][static_cast<size_t>(comp)] = f.random_nonzero(rng);
            av[static_cast<size_t>(comp)][3] = f.random_nonzero(rng);
        }
        apply_errata(f, y, b, av);
        DecodeOutput d = codec.decode(y, FqMat(0, sp.n0));
        if (d.ok() && d.u == u) ++decoded;
    }
    CHECK(decoded == 20);  // the constructed positive examples decode
}

TEST_CASE("serialization roundtrip and tamper detection") {
    Codec codec = Codec::make(*find_codec("gab9-3"));
    Rng rng(8080, 0);
    ExtMat x = codec.encode(codec.pre_encode(codec.random_message(rng), codec.random_mask(rng)));
    std::vector<uint8_t> bytes = codec.pack_outer(x);
    CHECK(bytes.size() == static_cast<size_t>(codec.spec().l) * codec.spec().n * codec.spec().n0);
    CHECK(codec.unpack_outer(bytes) == x);
    std::vector<uint8_t> tampered = bytes;
    tampered[5] ^= 0x40;
    CHECK(!(codec.unpack_outer(tampered) == x));
    // sub-byte symbols pack densely
    Codec c5 = Codec::make(*find_codec("gab14-5"));
    ExtMat x5 = c5.encode(c5.pre_encode(c5.random_message(rng), c5.random_mask(rng)));
    std::vector<uint8_t> b5 = c5.pack_outer(x5);
    CHECK(b5.size() == (static_cast<size_t>(c5.spec().l) * c5.spec().n * c5.spec().n0 * 5 + 7) / 8);
    CHECK(c5.unpack_outer(b5) == x5);
}

TEST_CASE("key equation holds on every successful decode") {
    CodecSpec sp = full_length_spec(8, 9, 3, 3);
    Codec codec = Codec::make(sp);
    const Field& f = codec.field();
    Rng rng(616, 0);
    for (int trial = 0; trial < 30; ++trial) {
        ExtMat u = codec.random_message(rng);
        ExtMat y = codec.encode(codec.pre_encode(u, ExtMat(sp.l, 0)));
        int tau = 1 + static_cast<int>(rng.below(3));
        auto [b, bh] = random_errata_locations(f, tau, 0, sp.n0, rng);
        (void)bh;
        std::vector<std::vector<Elem>> av(static_cast<size_t>(sp.l), std::vector<Elem>(static_cast<size_t>(tau)));
        for (auto& row : av)
            for (Elem& e : row) e = f.random_elem(rng);
        apply_errata(f, y, b, av);
        REQUIRE(codec.decode(y, FqMat(0, sp.n0)).ok());

        // reconstruct the reversed syndromes and check the register property
        const int n = sp.n, k = sp.k, nk = n - k;
        for (int comp = 0; comp < sp.l; ++comp) {
            std::vector<Elem> s(static_cast<size_t>(nk), f.zero());
            for (int t = 0; t < nk; ++t)
                for (int v = 0; v < n; ++v)
                    s[static_cast<size_t>(t)] = f.add(s[static_cast<size_t>(t)], f.fast_mul(y.at(comp, v), v + k + t));
            std::vector<Elem> rev(static_cast<size_t>(nk));
            for (int t = 0; t < nk; ++t) rev[static_cast<size_t>(t)] = f.qpow(s[static_cast<size_t>(nk - 1 - t)], t - nk + 1);
            LinPoly elp = lbma(f, rev);
            for (int i = elp.degree(); i < nk; ++i) {
                Elem acc = f.zero();
                for (int v = 0; v <= elp.degree(); ++v)
                    acc = f.add(acc, f.mul(elp.coeffs[static_cast<size_t>(v)], f.qpow(rev[static_cast<size_t>(i - v)], v)));
                CHECK(f.is_zero(acc));
            }
        }
    }
}
