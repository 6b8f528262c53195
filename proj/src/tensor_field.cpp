#include "ibshell/tensor_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ibshell/errors.hpp"

namespace ibshell {

std::vector<double> SurfaceLattice::area_weights() const {
    std::vector<double> w(nodes());
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) w[index(i, j)] = area_weight(i);
    return w;
}

void SurfaceLattice::validate(int min_dim) const {
    if (n1 < min_dim || n2 < min_dim)
        throw DimensionTooSmall("surface lattice " + std::to_string(n1) + "x" + std::to_string(n2) +
                                " is smaller than the minimum " + std::to_string(min_dim));
    if (!(dq1 > 0.0) || !std::isfinite(dq1)) throw InvalidParameter("surface lattice: dq1 must be positive");
    if (dq2.size() != static_cast<std::size_t>(n1))
        throw InvalidParameter("surface lattice: need one dq2 per q1-row");
    for (double d : dq2)
        if (!(d > 0.0) || !std::isfinite(d)) throw InvalidParameter("surface lattice: every dq2 must be positive");
}

TensorField::TensorField(std::size_t nodes, std::vector<Slot> slots)
    : nodes_(nodes), slots_(std::move(slots)), data_(nodes * (std::size_t{1} << slots_.size()), 0.0) {}

TensorField TensorField::scalar(std::vector<double> values) {
    TensorField f;
    f.nodes_ = values.size();
    f.data_ = std::move(values);
    return f;
}

std::size_t TensorField::pack(std::initializer_list<int> idx) {
    std::size_t c = 0;
    for (int v : idx) c = (c << 1) | static_cast<std::size_t>(v & 1);
    return c;
}

bool TensorField::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double TensorField::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

namespace {
void require_same_shape(const TensorField& a, const TensorField& b) {
    if (a.nodes() != b.nodes() || a.slots() != b.slots())
        throw InvalidParameter("tensor fields differ in shape");
}
}  // namespace

TensorField& TensorField::operator+=(const TensorField& other) {
    require_same_shape(*this, other);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

TensorField& TensorField::operator-=(const TensorField& other) {
    require_same_shape(*this, other);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

TensorField& TensorField::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }
TensorField operator*(double s, TensorField a) { return a *= s; }

TensorField contract(const TensorField& field, std::size_t slot_a, std::size_t slot_b) {
    const std::size_t rank = field.rank();
    if (slot_a == slot_b || slot_a >= rank || slot_b >= rank)
        throw InvalidParameter("contract: invalid slot pair");
    std::vector<Slot> slots;
    std::vector<std::size_t> free;
    for (std::size_t k = 0; k < rank; ++k)
        if (k != slot_a && k != slot_b) {
            slots.push_back(field.slots()[k]);
            free.push_back(k);
        }
    TensorField out(field.nodes(), slots);
    const std::size_t n = field.nodes();
    for (std::size_t rc = 0; rc < out.components(); ++rc) {
        std::size_t base = 0;
        for (std::size_t f = 0; f < free.size(); ++f)
            base = with_index(base, rank, free[f], index_of(rc, free.size(), f));
        auto dst = out.component(rc);
        for (int s = 0; s < 2; ++s) {
            std::size_t c = with_index(with_index(base, rank, slot_a, s), rank, slot_b, s);
            auto src = field.component(c);
            for (std::size_t q = 0; q < n; ++q) dst[q] += src[q];
        }
    }
    return out;
}

TensorField contract_product(const TensorField& a, const TensorField& b,
                             std::initializer_list<std::pair<std::size_t, std::size_t>> pairs) {
    if (a.nodes() != b.nodes()) throw InvalidParameter("contract_product: node count mismatch");
    const std::size_t ra = a.rank();
    const std::size_t rb = b.rank();
    std::vector<bool> a_used(ra, false), b_used(rb, false);
    for (auto [sa, sb] : pairs) {
        if (sa >= ra || sb >= rb || a_used[sa] || b_used[sb])
            throw InvalidParameter("contract_product: invalid slot pair");
        a_used[sa] = true;
        b_used[sb] = true;
    }
    std::vector<Slot> slots;
    std::vector<std::size_t> a_free, b_free;
    for (std::size_t k = 0; k < ra; ++k)
        if (!a_used[k]) { a_free.push_back(k); slots.push_back(a.slots()[k]); }
    for (std::size_t k = 0; k < rb; ++k)
        if (!b_used[k]) { b_free.push_back(k); slots.push_back(b.slots()[k]); }

    TensorField out(a.nodes(), slots);
    const std::size_t rr = slots.size();
    const std::size_t npairs = pairs.size();
    const std::size_t n = a.nodes();

    for (std::size_t rc = 0; rc < out.components(); ++rc) {
        std::size_t abase = 0, bbase = 0;
        for (std::size_t f = 0; f < a_free.size(); ++f)
            abase = with_index(abase, ra, a_free[f], index_of(rc, rr, f));
        for (std::size_t f = 0; f < b_free.size(); ++f)
            bbase = with_index(bbase, rb, b_free[f], index_of(rc, rr, a_free.size() + f));
        auto dst = out.component(rc);
        for (std::size_t s = 0; s < (std::size_t{1} << npairs); ++s) {
            std::size_t ac = abase, bc = bbase;
            std::size_t p = 0;
            for (auto [sa, sb] : pairs) {
                const int v = index_of(s, npairs, p++);
                ac = with_index(ac, ra, sa, v);
                bc = with_index(bc, rb, sb, v);
            }
            auto x = a.component(ac);
            auto y = b.component(bc);
            for (std::size_t q = 0; q < n; ++q) dst[q] += x[q] * y[q];
        }
    }
    return out;
}

}  // namespace ibshell
