#ifndef BLOCKADE_LAYOUT_HPP
#define BLOCKADE_LAYOUT_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace blockade {

/// Shape of the truncated Hilbert space: a transmon with `transmon_levels`
/// levels followed by one bosonic mode per entry of `mode_dims`. The flat
/// index runs with the transmon slowest and the last mode fastest.
class SystemLayout {
public:
    SystemLayout(int transmon_levels, std::vector<int> mode_dims)
        : transmon_levels_(transmon_levels), mode_dims_(std::move(mode_dims)) {
        if (transmon_levels_ < 1)
            throw std::invalid_argument("SystemLayout: transmon_levels must be >= 1");
        total_dim_ = transmon_levels_;
        for (int d : mode_dims_) {
            if (d < 1)
                throw std::invalid_argument("SystemLayout: mode dims must be >= 1");
            total_dim_ *= d;
        }
    }

    int transmon_levels() const { return transmon_levels_; }
    const std::vector<int>& mode_dims() const { return mode_dims_; }
    int n_modes() const { return static_cast<int>(mode_dims_.size()); }
    int total_dim() const { return total_dim_; }

    /// Number of subsystems including the transmon (site 0).
    int n_sites() const { return n_modes() + 1; }

    /// Dimension of subsystem `site` (site 0 = transmon, site m+1 = mode m).
    int site_dim(int site) const {
        if (site == 0) return transmon_levels_;
        return mode_dims_.at(static_cast<std::size_t>(site - 1));
    }

    int index_of(int transmon_level, const std::vector<int>& occupations) const {
        if (transmon_level < 0 || transmon_level >= transmon_levels_)
            throw std::out_of_range("SystemLayout: transmon level out of range");
        if (occupations.size() != mode_dims_.size())
            throw std::invalid_argument("SystemLayout: occupation count != mode count");
        int idx = transmon_level;
        for (std::size_t m = 0; m < mode_dims_.size(); ++m) {
            if (occupations[m] < 0 || occupations[m] >= mode_dims_[m])
                throw std::out_of_range("SystemLayout: occupation exceeds mode truncation");
            idx = idx * mode_dims_[m] + occupations[m];
        }
        return idx;
    }

    /// Inverse of index_of; returns {transmon_level, occupations}.
    std::pair<int, std::vector<int>> occupations_of(int index) const {
        if (index < 0 || index >= total_dim_)
            throw std::out_of_range("SystemLayout: index out of range");
        std::vector<int> occ(mode_dims_.size());
        for (std::size_t m = mode_dims_.size(); m-- > 0;) {
            occ[m] = index % mode_dims_[m];
            index /= mode_dims_[m];
        }
        return {index, occ};
    }

    bool operator==(const SystemLayout& other) const {
        return transmon_levels_ == other.transmon_levels_ && mode_dims_ == other.mode_dims_;
    }

private:
    int transmon_levels_;
    std::vector<int> mode_dims_;
    int total_dim_;
};

} // namespace blockade

#endif
