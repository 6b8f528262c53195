#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace ibshell {

// Rectangular parameter lattice of the shell middle surface. Node (i, j)
// sits in q1-row i and q2-column j; storage is row-major (j fastest).
// The q2 spacing is stored per q1-row because the model shell widens along q1.
struct SurfaceLattice {
    int n1 = 0;
    int n2 = 0;
    double dq1 = 0.0;
    std::vector<double> dq2;  // one entry per q1-row

    std::size_t nodes() const { return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n2) + static_cast<std::size_t>(j);
    }
    // Lagrangian quadrature weight dq1 * dq2(row).
    double area_weight(int i) const { return dq1 * dq2[static_cast<std::size_t>(i)]; }
    std::vector<double> area_weights() const;

    // Throws DimensionTooSmall / InvalidParameter.
    void validate(int min_dim = 5) const;
};

enum class Slot : std::uint8_t { Lower, Upper };

// Field of (p,q)-tensors on the surface lattice with indices in {1,2}.
// Components are stored component-major so each component is a contiguous
// scalar field. Component number packs the index values with slot 0 as the
// most significant bit: comp = sum_k idx_k << (rank-1-k), idx_k in {0,1}.
class TensorField {
public:
    TensorField() = default;
    TensorField(std::size_t nodes, std::vector<Slot> slots);

    static TensorField scalar(std::size_t nodes) { return TensorField(nodes, {}); }
    static TensorField scalar(std::vector<double> values);

    std::size_t nodes() const { return nodes_; }
    std::size_t rank() const { return slots_.size(); }
    std::size_t components() const { return std::size_t{1} << slots_.size(); }
    const std::vector<Slot>& slots() const { return slots_; }

    double& at(std::size_t comp, std::size_t node) { return data_[comp * nodes_ + node]; }
    double at(std::size_t comp, std::size_t node) const { return data_[comp * nodes_ + node]; }

    // Access by explicit index values (each 0 or 1), e.g. at({0, 1}, node).
    double& at(std::initializer_list<int> idx, std::size_t node) { return at(pack(idx), node); }
    double at(std::initializer_list<int> idx, std::size_t node) const { return at(pack(idx), node); }

    std::span<double> component(std::size_t comp) { return {data_.data() + comp * nodes_, nodes_}; }
    std::span<const double> component(std::size_t comp) const { return {data_.data() + comp * nodes_, nodes_}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool empty() const { return nodes_ == 0; }
    bool all_finite() const;
    double max_abs() const;

    TensorField& operator+=(const TensorField& other);
    TensorField& operator-=(const TensorField& other);
    TensorField& operator*=(double s);

    static std::size_t pack(std::initializer_list<int> idx);

private:
    std::size_t nodes_ = 0;
    std::vector<Slot> slots_;
    std::vector<double> data_;
};

TensorField operator+(TensorField a, const TensorField& b);
TensorField operator-(TensorField a, const TensorField& b);
TensorField operator*(double s, TensorField a);

// Extract / replace the index value of slot k (0-based) in a packed component.
inline int index_of(std::size_t comp, std::size_t rank, std::size_t k) {
    return static_cast<int>((comp >> (rank - 1 - k)) & 1U);
}
inline std::size_t with_index(std::size_t comp, std::size_t rank, std::size_t k, int value) {
    const std::size_t bit = std::size_t{1} << (rank - 1 - k);
    return value ? (comp | bit) : (comp & ~bit);
}

// Trace over two slots of one field. Pure index summation; the caller pairs
// an upper with a lower slot (or supplies the metric explicitly).
TensorField contract(const TensorField& field, std::size_t slot_a, std::size_t slot_b);

// Tensor product of a and b followed by summation over the listed
// (slot of a, slot of b) pairs. Result slots are a's free slots in order,
// then b's free slots in order.
TensorField contract_product(const TensorField& a, const TensorField& b,
                             std::initializer_list<std::pair<std::size_t, std::size_t>> pairs);

}  // namespace ibshell
