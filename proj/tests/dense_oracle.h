// Copyright 2026 The seqmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Brute-force dense evaluation used as an independent oracle by the tests.
// Deliberately shares no code with the library: plain row-major storage,
// textbook loops, no Eigen.

#ifndef SEQMEAS_TESTS_DENSE_ORACLE_H_
#define SEQMEAS_TESTS_DENSE_ORACLE_H_

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace dense_oracle {

using cplx = std::complex<double>;

struct DMat {
    size_t n = 0;
    std::vector<cplx> a;

    explicit DMat(size_t n_) : n(n_), a(n_ * n_) {}
    cplx &at(size_t i, size_t j) { return a[i * n + j]; }
    cplx at(size_t i, size_t j) const { return a[i * n + j]; }
};

using DVec = std::vector<cplx>;

inline DMat identity(size_t n) {
    DMat m(n);
    for (size_t i = 0; i < n; i++) m.at(i, i) = 1.0;
    return m;
}

// Diagonal 0/1 projector from a membership mask.
inline DMat diag_projector(const std::vector<int> &mask) {
    DMat m(mask.size());
    for (size_t i = 0; i < mask.size(); i++) m.at(i, i) = mask[i] ? 1.0 : 0.0;
    return m;
}

// U e_p = cos(t) e_p + sin(t) e_q, U e_q = -sin(t) e_p + cos(t) e_q.
inline DMat plane_rotation(size_t n, size_t p, size_t q, double t) {
    DMat m = identity(n);
    m.at(p, p) = std::cos(t);
    m.at(q, p) = std::sin(t);
    m.at(p, q) = -std::sin(t);
    m.at(q, q) = std::cos(t);
    return m;
}

inline DMat mul(const DMat &x, const DMat &y) {
    DMat r(x.n);
    for (size_t i = 0; i < x.n; i++)
        for (size_t j = 0; j < x.n; j++) {
            cplx s = 0;
            for (size_t k = 0; k < x.n; k++) s += x.at(i, k) * y.at(k, j);
            r.at(i, j) = s;
        }
    return r;
}

inline DMat adj(const DMat &x) {
    DMat r(x.n);
    for (size_t i = 0; i < x.n; i++)
        for (size_t j = 0; j < x.n; j++) r.at(i, j) = std::conj(x.at(j, i));
    return r;
}

inline DMat sub(const DMat &x, const DMat &y) {
    DMat r(x.n);
    for (size_t i = 0; i < x.a.size(); i++) r.a[i] = x.a[i] - y.a[i];
    return r;
}

inline double frob(const DMat &x) {
    double s = 0;
    for (auto v : x.a) s += std::norm(v);
    return std::sqrt(s);
}

inline DVec matvec(const DMat &x, const DVec &v) {
    DVec r(x.n);
    for (size_t i = 0; i < x.n; i++)
        for (size_t k = 0; k < x.n; k++) r[i] += x.at(i, k) * v[k];
    return r;
}

inline double norm2(const DVec &v) {
    double s = 0;
    for (auto c : v) s += std::norm(c);
    return s;
}

inline cplx inner(const DVec &x, const DVec &y) {
    cplx s = 0;
    for (size_t i = 0; i < x.size(); i++) s += std::conj(y[i]) * x[i];
    return s;
}

inline DVec basis(size_t n, size_t k) {
    DVec v(n);
    v[k] = 1.0;
    return v;
}

struct DMeasurement {
    DMat p;
    DMat u;
};

inline DMat transformer(const DMeasurement &m) { return mul(m.u, m.p); }

// ||M_k ... M_1 psi||^2.
inline double joint(const std::vector<DMeasurement> &seq, DVec psi) {
    for (const auto &m : seq) psi = matvec(transformer(m), psi);
    return norm2(psi);
}

// Renormalized chain through the prefix, then Born probability of `last`.
inline double conditional(const std::vector<DMeasurement> &prefix, const DMeasurement &last, DVec psi) {
    for (const auto &m : prefix) {
        psi = matvec(transformer(m), psi);
        double w = std::sqrt(norm2(psi));
        for (auto &c : psi) c /= w;
    }
    return inner(matvec(last.p, psi), psi).real();
}

// P1 U1* P2 U1 P1 - P2 U2* P1 U2 P2.
inline DMat order_difference(const DMeasurement &a, const DMeasurement &b) {
    DMat lhs = mul(a.p, mul(adj(a.u), mul(b.p, mul(a.u, a.p))));
    DMat rhs = mul(b.p, mul(adj(b.u), mul(a.p, mul(b.u, b.p))));
    return sub(lhs, rhs);
}

// Spectral norm of a Hermitian matrix: sqrt of the top eigenvalue of H^2 by
// power iteration from a fixed generic start vector.
inline double hermitian_spectral_norm(const DMat &h) {
    DMat h2 = mul(h, h);
    DVec v(h.n);
    for (size_t i = 0; i < h.n; i++) v[i] = cplx(1.0 + 0.1 * i, 0.03 * (i + 1));
    double lambda = 0;
    for (int it = 0; it < 5000; it++) {
        DVec w = matvec(h2, v);
        double nw = std::sqrt(norm2(w));
        if (nw == 0) return 0;
        for (auto &c : w) c /= nw;
        lambda = inner(matvec(h2, w), w).real();
        v = w;
    }
    return std::sqrt(std::max(lambda, 0.0));
}

// The four-dimensional example: H1 = span(e1,e2,e3), H2 = span(e1,e2,e4),
// U1 rotates (e2,e3) by theta, U2 = I.
inline DMeasurement canonical_a(double theta) {
    return {diag_projector({1, 1, 1, 0}), plane_rotation(4, 1, 2, theta)};
}
inline DMeasurement canonical_b() {
    return {diag_projector({1, 1, 0, 1}), identity(4)};
}

}  // namespace dense_oracle

#endif  // SEQMEAS_TESTS_DENSE_ORACLE_H_
