// Semi-analytic guided-mode model of the multimode interference (MMI) region
// and the programmable multi-operand MMI (MOMMI).
//
// The device transfer matrix is W = E^T diag(exp(j*phi)) E where E couples
// the k access ports into m lateral guided modes and phi collects per-mode
// propagation phases. Tuning pads add a local index shift that advances each
// mode's phase in proportion to its intensity overlap with the pad, so the
// k x k matrix is reparametrized by d normalized pad drives eps in [0,1].
// The model is reciprocal (W symmetric) and passive (sigma_max <= 1) by
// construction. Mode-to-mode scattering inside a pad is neglected
// (first-order perturbation).
#pragma once

#include <cstdint>
#include <mutex>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "m3icro/cmatrix.hpp"

namespace m3icro {

/// MMI geometry. Lengths in micrometres, indices dimensionless.
struct MmiGeometry {
    int ports = 4;                       ///< access ports per side (k)
    double length_um = 0.0;              ///< multimode region length L
    double width_um = 0.0;               ///< multimode region width
    double effective_width_um = 0.0;     ///< effective width of the 0-th mode
    double core_index = 2.8;             ///< effective index of the multimode region
    double cladding_index = 1.44;
    double wavelength_um = 1.55;
    int num_modes = 8;                   ///< lateral guided modes retained (m >= k)
    std::vector<double> port_centers_um; ///< k transverse positions, increasing
    double port_width_um = 0.0;          ///< access-waveguide mode width

    double vacuum_wavenumber() const;    ///< k0 = 2*pi / wavelength
    void validate() const;               ///< throws ArgumentError on violation
};

/// One tunable pad: a rectangle inside the multimode region.
struct PadRect {
    double z_start = 0.0, z_end = 0.0;   ///< along propagation
    double y_start = 0.0, y_end = 0.0;   ///< transverse
};

struct PadLayout {
    std::vector<PadRect> pads;           ///< sorted, non-overlapping in z
    double max_index_shift = 0.03;       ///< index change at eps = 1

    int count() const { return static_cast<int>(pads.size()); }
    void validate(const MmiGeometry& geometry) const;
};

/// Fully assembled device: geometry plus the precomputed mode data the
/// transfer evaluation needs. Immutable after construction.
struct MommiDesign {
    MmiGeometry geometry;
    PadLayout pads;
    std::vector<double> mode_betas;      ///< m propagation constants (rad/um)
    RMatrix coupling;                    ///< m x k port-to-mode matrix E, orthonormal columns
    RMatrix pad_overlaps;                ///< m x d mode/pad intensity overlaps, in [0,1]

    int ports() const { return geometry.ports; }
    int pad_count() const { return pads.count(); }
};

/// Figure of merit of an MMI power splitter.
struct DesignFoM {
    double insertion_loss_db = 0.0;
    double imbalance_db = 0.0;
    double fom = 0.0;                    ///< insertion_loss_db * imbalance_db
};

/// Beat length L_pi = 4 n_eff W_e0^2 / (3 lambda0).
double beat_length(const MmiGeometry& geometry);

/// Propagation-constant spacing beta_0 - beta_nu = nu (nu + 2) pi / (3 L_pi).
/// Throws ArgumentError when the mode index is out of [0, num_modes).
double beta_spacing(const MmiGeometry& geometry, int mode);

/// p-th N-fold self-imaging length L = p * 3 L_pi / N with N = ports.
/// Throws ArgumentError when p < 1.
double self_imaging_length(const MmiGeometry& geometry, int p);

/// Default geometry for a k x k device: width 1.2k um, ports uniformly
/// spaced and mirror-symmetric, length at the first k-fold self-image.
MmiGeometry default_geometry(int k);

/// Default pad layout: d equal-length segments along z, each covering the
/// lower half of the width. Full-width pads would shift all modes equally
/// and act as a global phase only.
PadLayout default_pad_layout(const MmiGeometry& geometry, int d);

/// Computes mode betas, the coupling matrix E (raised-cosine port profiles
/// against sinusoidal lateral modes, then Gram-Schmidt) and pad overlaps.
MommiDesign build_design(MmiGeometry geometry, PadLayout pads);

/// Zero-bias transfer matrix W(0). Entry (0,0) is rotated to be real and
/// non-negative so the matrix (and everything derived from it) is unique.
CMatrix base_transfer(const MommiDesign& design);

/// Transfer matrix at pad drives eps (each in [0,1]; out-of-range values
/// throw DomainError, never clamp). mommi_transfer(design, 0) equals
/// base_transfer(design) exactly.
CMatrix mommi_transfer(const MommiDesign& design, std::span<const double> eps);

/// Insertion loss / imbalance of the zero-bias device, worst case over
/// input ports.
DesignFoM evaluate_fom(const MommiDesign& design);
DesignFoM evaluate_fom(const CMatrix& transfer);

/// Relative search grid around (self_imaging_length, default width).
struct SearchGrid {
    std::vector<double> length_scales;   ///< multipliers on self_imaging_length
    std::vector<double> width_scales;    ///< multipliers on the default width
};

SearchGrid default_search_grid();

/// Grid search minimizing FoM = insertion loss x imbalance. Ties broken by
/// smaller length, then smaller width. d pads are laid out per
/// default_pad_layout. Throws ArgumentError for an empty grid or k < 2.
std::pair<MommiDesign, DesignFoM> design_initial_mmi(int k, int d, const SearchGrid& grid);
std::pair<MommiDesign, DesignFoM> design_initial_mmi(int k, int d);

/// Ground-truth table: W at every quantized eps level tuple, lexicographic
/// with pad 0 slowest.
struct MommiLut {
    int ports = 0;
    int pad_count = 0;
    int bits = 0;
    std::vector<CMatrix> entries;

    std::size_t levels_per_pad() const { return std::size_t{1} << bits; }
    std::size_t index_of(std::span<const int> levels) const;
    const CMatrix& at(std::span<const int> levels) const;
    /// Quantized value of one level: level / (2^bits - 1).
    double level_value(int level) const;
};

inline constexpr std::size_t kDefaultLutEntryCap = std::size_t{1} << 24;

/// Enumerates all (2^bits)^d level tuples. Throws ArgumentError for bits
/// outside [1,8] and CapacityError when the table would exceed entry_cap
/// (use CachingMommiEvaluator for on-demand evaluation instead).
MommiLut generate_lut(const MommiDesign& design, int bits,
                      std::size_t entry_cap = kDefaultLutEntryCap);

/// Memoizing evaluator for level-tuple spaces too large to enumerate.
/// Thread-safe: concurrent readers see either absence or a complete entry.
class CachingMommiEvaluator {
public:
    CachingMommiEvaluator(const MommiDesign& design, int bits);

    const CMatrix& at(std::span<const int> levels);
    std::size_t cached() const;

private:
    const MommiDesign& design_;
    int bits_;
    mutable std::mutex mutex_;
    std::unordered_map<std::uint64_t, CMatrix> cache_;
};

} // namespace m3icro
