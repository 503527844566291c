#include "fracdd/schwarz.hpp"

#include <map>
#include <string>
#include <utility>

#include "fracdd/errors.hpp"

namespace fracdd {

SchwarzPreconditioner build_preconditioner(const FractionalOperator& op, const TwoLevelDecomposition& decomposition,
                                           const Eigen::SparseMatrix<double>& prolongation) {
    const auto expected_subdomains = static_cast<std::size_t>(decomposition.coarse_per_axis()) *
                                     static_cast<std::size_t>(decomposition.coarse_per_axis());
    if (decomposition.num_subdomains() != expected_subdomains ||
        static_cast<std::size_t>(prolongation.rows()) != op.dim()) {
        throw ConfigError("decomposition, prolongation and operator come from different meshes");
    }
    SchwarzPreconditioner pre;
    pre.dim_ = op.dim();

    std::map<std::pair<int, int>, std::size_t> shape_to_factor;
    std::vector<std::size_t> representative;
    for (std::size_t i = 0; i < decomposition.num_subdomains(); ++i) {
        const auto& s = decomposition.subdomains()[i];
        for (auto d : s.dofs) {
            if (d >= op.dim()) {
                throw ConfigError("decomposition DOF out of range for this operator");
            }
        }
        const std::pair<int, int> shape{s.extended.x1 - s.extended.x0, s.extended.y1 - s.extended.y0};
        auto [it, inserted] = shape_to_factor.try_emplace(shape, representative.size());
        if (inserted) {
            representative.push_back(i);
        }
        pre.blocks_.push_back({s.dofs, it->second});
    }

    pre.factors_.resize(representative.size());
    bool failed = false;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t f = 0; f < representative.size(); ++f) {
        const auto& dofs = decomposition.subdomains()[representative[f]].dofs;
        pre.factors_[f].compute(op.extract(dofs));
        if (pre.factors_[f].info() != Eigen::Success) {
#pragma omp atomic write
            failed = true;
        }
    }
    if (failed) {
        throw NumericalError("a subdomain block is not positive definite");
    }

    pre.colors_ = decomposition.colors();
    pre.coarse_ = build_coarse(op, prolongation);
    return pre;
}

void SchwarzPreconditioner::check_dim(const Vector& r) const {
    if (static_cast<std::size_t>(r.size()) != dim_) {
        throw ConfigError("preconditioner dimension mismatch: expected " + std::to_string(dim_) + ", got " +
                          std::to_string(r.size()));
    }
}

Vector SchwarzPreconditioner::apply_one_level(const Vector& r) const {
    check_dim(r);
    Vector z = Vector::Zero(r.size());
    for (const auto& color : colors_) {
        const auto count = static_cast<std::ptrdiff_t>(color.size());
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t c = 0; c < count; ++c) {
            const auto& block = blocks_[color[static_cast<std::size_t>(c)]];
            const auto size = static_cast<Eigen::Index>(block.dofs.size());
            Vector local(size);
            for (Eigen::Index a = 0; a < size; ++a) {
                local(a) = r(static_cast<Eigen::Index>(block.dofs[static_cast<std::size_t>(a)]));
            }
            factors_[block.factor].solveInPlace(local);
            for (Eigen::Index a = 0; a < size; ++a) {
                z(static_cast<Eigen::Index>(block.dofs[static_cast<std::size_t>(a)])) += local(a);
            }
        }
    }
    return z;
}

Vector SchwarzPreconditioner::apply_coarse(const Vector& r) const {
    check_dim(r);
    return coarse_.correction(r);
}

Vector SchwarzPreconditioner::apply(const Vector& r) const {
    return apply_one_level(r) + apply_coarse(r);
}

} // namespace fracdd
