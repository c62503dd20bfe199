#include "pusnec/rs.hpp"

namespace pusnec {

namespace {

// polynomials low-degree-first over F_q
std::vector<uint16_t> poly_mul(const GroundField& gf, const std::vector<uint16_t>& a,
                               const std::vector<uint16_t>& b) {
    std::vector<uint16_t> r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] ^= gf.mul(a[i], b[j]);
    }
    return r;
}

uint16_t poly_eval(const GroundField& gf, const std::vector<uint16_t>& p, uint16_t x) {
    uint16_t acc = 0;
    for (size_t i = p.size(); i-- > 0;) acc = static_cast<uint16_t>(gf.mul(acc, x) ^ p[i]);
    return acc;
}

}  // namespace

ReedSolomon::ReedSolomon(const GroundField& gf, int n, int k) : gf_(gf), n_(n), k_(k) {
    if (n <= k || n > static_cast<int>(gf.q()) - 1) throw FieldError("reed-solomon: need k < n <= q-1");
    gen_ = {1};
    for (int j = 0; j < n - k; ++j) {
        // multiply by (x - alpha^j); fcr = 0
        std::vector<uint16_t> factor = {gf.pow_generator(static_cast<uint32_t>(j)), 1};
        gen_ = poly_mul(gf_, gen_, factor);
    }
}

std::vector<uint16_t> ReedSolomon::encode(const std::vector<uint16_t>& msg) const {
    if (static_cast<int>(msg.size()) != k_) throw FieldError("reed-solomon: message length mismatch");
    // systematic: message at the top coefficients, parity = remainder
    std::vector<uint16_t> word(static_cast<size_t>(n_), 0);
    for (int i = 0; i < k_; ++i) word[static_cast<size_t>(n_ - k_ + i)] = msg[static_cast<size_t>(i)];
    std::vector<uint16_t> rem = word;
    for (int i = n_ - 1; i >= n_ - k_; --i) {
        uint16_t c = rem[static_cast<size_t>(i)];
        if (!c) continue;
        int shift = i - (n_ - k_);
        for (size_t j = 0; j < gen_.size(); ++j) rem[static_cast<size_t>(shift) + j] ^= gf_.mul(c, gen_[j]);
    }
    for (int i = 0; i < n_ - k_; ++i) word[static_cast<size_t>(i)] = rem[static_cast<size_t>(i)];
    return word;
}

std::optional<std::vector<uint16_t>> ReedSolomon::decode(const std::vector<uint16_t>& word,
                                                         const std::vector<int>& erasures) const {
    if (static_cast<int>(word.size()) != n_) throw FieldError("reed-solomon: word length mismatch");
    const int nk = n_ - k_;
    const int rho = static_cast<int>(erasures.size());
    if (rho > nk) return std::nullopt;

    std::vector<uint16_t> syn(static_cast<size_t>(nk), 0);
    bool clean = true;
    for (int j = 0; j < nk; ++j) {
        uint16_t x = gf_.pow_generator(static_cast<uint32_t>(j));
        syn[static_cast<size_t>(j)] = poly_eval(gf_, word, x);
        if (syn[static_cast<size_t>(j)]) clean = false;
    }
    auto message_part = [&](const std::vector<uint16_t>& w) {
        return std::vector<uint16_t>(w.begin() + (n_ - k_), w.end());
    };
    if (clean) return message_part(word);

    // erasure locator and modified syndromes
    std::vector<uint16_t> gamma = {1};
    for (int pos : erasures) {
        std::vector<uint16_t> factor = {1, gf_.pow_generator(static_cast<uint32_t>(pos))};
        gamma = poly_mul(gf_, gamma, factor);
    }
    std::vector<uint16_t> xi = poly_mul(gf_, gamma, syn);
    xi.resize(static_cast<size_t>(nk), 0);

    // errors-only Berlekamp-Massey on the shifted modified syndromes
    std::vector<uint16_t> t(static_cast<size_t>(nk - rho));
    for (int j = 0; j < nk - rho; ++j) t[static_cast<size_t>(j)] = xi[static_cast<size_t>(j + rho)];
    std::vector<uint16_t> lambda = {1}, prev = {1};
    int L = 0, m = 1;
    uint16_t b = 1;
    for (int j = 0; j < nk - rho; ++j) {
        uint16_t delta = 0;
        for (int i = 0; i <= L && i < static_cast<int>(lambda.size()); ++i)
            if (j - i >= 0) delta ^= gf_.mul(lambda[static_cast<size_t>(i)], t[static_cast<size_t>(j - i)]);
        if (delta == 0) {
            ++m;
        } else if (2 * L <= j) {
            std::vector<uint16_t> save = lambda;
            uint16_t coef = gf_.mul(delta, gf_.inv(b));
            if (static_cast<int>(lambda.size()) < static_cast<int>(prev.size()) + m)
                lambda.resize(prev.size() + static_cast<size_t>(m), 0);
            for (size_t i = 0; i < prev.size(); ++i) lambda[i + static_cast<size_t>(m)] ^= gf_.mul(coef, prev[i]);
            L = j + 1 - L;
            prev = std::move(save);
            b = delta;
            m = 1;
        } else {
            uint16_t coef = gf_.mul(delta, gf_.inv(b));
            if (static_cast<int>(lambda.size()) < static_cast<int>(prev.size()) + m)
                lambda.resize(prev.size() + static_cast<size_t>(m), 0);
            for (size_t i = 0; i < prev.size(); ++i) lambda[i + static_cast<size_t>(m)] ^= gf_.mul(coef, prev[i]);
            ++m;
        }
    }
    while (!lambda.empty() && lambda.back() == 0) lambda.pop_back();
    int tau = static_cast<int>(lambda.size()) - 1;
    if (2 * tau > nk - rho) return std::nullopt;

    std::vector<uint16_t> psi = poly_mul(gf_, lambda, gamma);
    std::vector<uint16_t> omega = poly_mul(gf_, syn, psi);
    omega.resize(static_cast<size_t>(nk), 0);

    // Chien search over all positions
    std::vector<int> positions;
    for (int i = 0; i < n_; ++i) {
        uint16_t xinv = gf_.pow_generator(static_cast<uint32_t>((gf_.q() - 1 - i % (gf_.q() - 1)) % (gf_.q() - 1)));
        if (poly_eval(gf_, psi, xinv) == 0) positions.push_back(i);
    }
    if (static_cast<int>(positions.size()) != static_cast<int>(psi.size()) - 1) return std::nullopt;

    // Forney, fcr = 0: e_i = X_i * Omega(X_i^-1) / Psi'(X_i^-1)
    std::vector<uint16_t> corrected = word;
    for (int pos : positions) {
        uint16_t x = gf_.pow_generator(static_cast<uint32_t>(pos));
        uint16_t xinv = gf_.inv(x);
        uint16_t num = gf_.mul(x, poly_eval(gf_, omega, xinv));
        uint16_t den = 0;  // formal derivative keeps odd-degree terms in char 2
        for (size_t i = 1; i < psi.size(); i += 2) {
            uint16_t term = psi[i];
            // x^{i-1} evaluated at xinv
            uint16_t p = 1;
            for (size_t e = 0; e + 1 < i; ++e) p = gf_.mul(p, xinv);
            den ^= gf_.mul(term, p);
        }
        if (den == 0) return std::nullopt;
        corrected[static_cast<size_t>(pos)] ^= gf_.mul(num, gf_.inv(den));
    }
    for (int j = 0; j < nk; ++j) {
        if (poly_eval(gf_, corrected, gf_.pow_generator(static_cast<uint32_t>(j)))) return std::nullopt;
    }
    return message_part(corrected);
}

}  // namespace pusnec
