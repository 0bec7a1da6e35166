#include "m3icro/momdevice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "m3icro/errors.hpp"

namespace m3icro {

namespace {

constexpr int kQuadraturePoints = 2001;

// L2-normalized lateral mode profile psi_nu(y) = sqrt(2/W) sin((nu+1) pi y / W).
double mode_profile(int mode, double y, double width) {
    return std::sqrt(2.0 / width) * std::sin((mode + 1) * M_PI * y / width);
}

// Raised-cosine access-port profile, un-normalized.
double port_profile(double y, double center, double width) {
    const double t = (y - center) / width;
    if (t <= -0.5 || t >= 0.5) return 0.0;
    return 1.0 + std::cos(2.0 * M_PI * t);
}

// Exact integral of the normalized mode intensity over [a, b]:
// int_a^b (2/W) sin^2(n pi y / W) dy with n = mode+1.
double mode_intensity_integral(int mode, double a, double b, double width) {
    const double c = (mode + 1) * M_PI / width;
    const double primitive_b = b / width - std::sin(2.0 * c * b) / (2.0 * c * width);
    const double primitive_a = a / width - std::sin(2.0 * c * a) / (2.0 * c * width);
    return primitive_b - primitive_a;
}

} // namespace

double MmiGeometry::vacuum_wavenumber() const { return 2.0 * M_PI / wavelength_um; }

void MmiGeometry::validate() const {
    if (ports < 1) throw ArgumentError("geometry: ports must be >= 1");
    if (length_um <= 0.0) throw ArgumentError("geometry: length must be positive");
    if (width_um <= 0.0) throw ArgumentError("geometry: width must be positive");
    if (effective_width_um <= 0.0) throw ArgumentError("geometry: effective width must be positive");
    if (wavelength_um <= 0.0) throw ArgumentError("geometry: wavelength must be positive");
    if (!(cladding_index > 0.0) || !(cladding_index < core_index)) {
        throw ArgumentError("geometry: need 0 < cladding index < core index");
    }
    if (num_modes < ports) throw ArgumentError("geometry: need at least as many modes as ports");
    if (static_cast<int>(port_centers_um.size()) != ports) {
        throw ArgumentError("geometry: expected " + std::to_string(ports) + " port centers");
    }
    if (port_width_um <= 0.0) throw ArgumentError("geometry: port width must be positive");
    for (int i = 0; i < ports; ++i) {
        const double y = port_centers_um[i];
        if (!(y > 0.0) || !(y < width_um)) {
            throw ArgumentError("geometry: port center " + std::to_string(i) +
                                " outside (0, width)");
        }
        if (i > 0 && !(y > port_centers_um[i - 1])) {
            throw ArgumentError("geometry: port centers must be strictly increasing");
        }
        // Mirror symmetry about width/2.
        const double mirror = port_centers_um[ports - 1 - i];
        if (std::abs(y + mirror - width_um) > 1e-9 * width_um) {
            throw ArgumentError("geometry: port centers must be mirror-symmetric about the axis");
        }
    }
}

void PadLayout::validate(const MmiGeometry& geometry) const {
    if (max_index_shift <= 0.0) throw ArgumentError("pads: max index shift must be positive");
    double prev_end = -1.0;
    for (std::size_t p = 0; p < pads.size(); ++p) {
        const PadRect& r = pads[p];
        if (!(r.z_start >= 0.0) || !(r.z_end <= geometry.length_um) || !(r.z_start < r.z_end)) {
            throw ArgumentError("pads: pad " + std::to_string(p) + " z-interval invalid");
        }
        if (!(r.y_start >= 0.0) || !(r.y_end <= geometry.width_um) || !(r.y_start < r.y_end)) {
            throw ArgumentError("pads: pad " + std::to_string(p) + " y-interval invalid");
        }
        if (r.z_start < prev_end) {
            throw ArgumentError("pads: z-intervals must be sorted and non-overlapping");
        }
        prev_end = r.z_end;
    }
}

double beat_length(const MmiGeometry& geometry) {
    const double we = geometry.effective_width_um;
    return 4.0 * geometry.core_index * we * we / (3.0 * geometry.wavelength_um);
}

double beta_spacing(const MmiGeometry& geometry, int mode) {
    if (mode < 0 || mode >= geometry.num_modes) {
        throw ArgumentError("beta_spacing: mode index " + std::to_string(mode) +
                            " outside [0, " + std::to_string(geometry.num_modes) + ")");
    }
    return static_cast<double>(mode) * (mode + 2) * M_PI / (3.0 * beat_length(geometry));
}

double self_imaging_length(const MmiGeometry& geometry, int p) {
    if (p < 1) throw ArgumentError("self_imaging_length: p must be >= 1");
    return p * 3.0 * beat_length(geometry) / geometry.ports;
}

MmiGeometry default_geometry(int k) {
    if (k < 1) throw ArgumentError("default_geometry: ports must be >= 1");
    MmiGeometry g;
    g.ports = k;
    g.width_um = 1.2 * k;
    g.effective_width_um = g.width_um;
    g.num_modes = std::max(k, 8);
    g.port_centers_um.resize(k);
    for (int i = 0; i < k; ++i) g.port_centers_um[i] = (i + 0.5) * g.width_um / k;
    g.port_width_um = 0.7 * g.width_um / k;
    g.length_um = self_imaging_length(g, 1);
    return g;
}

PadLayout default_pad_layout(const MmiGeometry& geometry, int d) {
    if (d < 1) throw ArgumentError("default_pad_layout: pad count must be >= 1");
    PadLayout layout;
    layout.pads.resize(d);
    const double seg = geometry.length_um / d;
    for (int p = 0; p < d; ++p) {
        layout.pads[p] = PadRect{p * seg, (p + 1) * seg, 0.0, geometry.width_um / 2.0};
    }
    return layout;
}

MommiDesign build_design(MmiGeometry geometry, PadLayout pads) {
    geometry.validate();
    pads.validate(geometry);

    const int m = geometry.num_modes;
    const int k = geometry.ports;
    const int d = pads.count();
    const double width = geometry.effective_width_um;

    MommiDesign design;
    design.geometry = geometry;
    design.pads = std::move(pads);

    // beta_nu = n_eff k0 - nu (nu + 2) pi / (3 L_pi); the dispersion relation
    // is taken as exact within the model.
    design.mode_betas.resize(m);
    const double beta0 = geometry.core_index * geometry.vacuum_wavenumber();
    for (int nu = 0; nu < m; ++nu) design.mode_betas[nu] = beta0 - beta_spacing(geometry, nu);

    // Port-to-mode overlaps on a trapezoid grid, then Gram-Schmidt so the
    // columns are exactly orthonormal (ports are idealized as lossless).
    RMatrix e(m, k);
    const double h = width / (kQuadraturePoints - 1);
    std::vector<double> port(kQuadraturePoints);
    for (int i = 0; i < k; ++i) {
        double norm_sq = 0.0;
        for (int q = 0; q < kQuadraturePoints; ++q) {
            const double y = q * h;
            port[q] = port_profile(y, geometry.port_centers_um[i], geometry.port_width_um);
            const double wq = (q == 0 || q == kQuadraturePoints - 1) ? 0.5 : 1.0;
            norm_sq += wq * port[q] * port[q] * h;
        }
        const double inv_norm = 1.0 / std::sqrt(norm_sq);
        for (int nu = 0; nu < m; ++nu) {
            double overlap = 0.0;
            for (int q = 0; q < kQuadraturePoints; ++q) {
                const double wq = (q == 0 || q == kQuadraturePoints - 1) ? 0.5 : 1.0;
                overlap += wq * port[q] * mode_profile(nu, q * h, width) * h;
            }
            e(nu, i) = overlap * inv_norm;
        }
    }
    // Modified Gram-Schmidt, two passes for orthogonality to ~1e-15.
    for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < k; ++j) {
            for (int prev = 0; prev < j; ++prev) {
                double dot = 0.0;
                for (int nu = 0; nu < m; ++nu) dot += e(nu, prev) * e(nu, j);
                for (int nu = 0; nu < m; ++nu) e(nu, j) -= dot * e(nu, prev);
            }
            double norm = 0.0;
            for (int nu = 0; nu < m; ++nu) norm += e(nu, j) * e(nu, j);
            norm = std::sqrt(norm);
            if (norm < 1e-12) {
                throw ArgumentError("build_design: port profiles are numerically dependent; "
                                    "increase mode count or separate ports");
            }
            for (int nu = 0; nu < m; ++nu) e(nu, j) /= norm;
        }
    }
    design.coupling = std::move(e);

    // Mode/pad intensity overlaps, exact integrals of the normalized modes.
    RMatrix overlaps(m, d);
    for (int nu = 0; nu < m; ++nu) {
        for (int p = 0; p < d; ++p) {
            const PadRect& r = design.pads.pads[p];
            const double v = mode_intensity_integral(nu, r.y_start, std::min(r.y_end, width), width);
            overlaps(nu, p) = std::clamp(v, 0.0, 1.0);
        }
    }
    design.pad_overlaps = std::move(overlaps);
    return design;
}

namespace {

// W = E^T diag(exp(j phi)) E with the (0,0)-real-non-negative phase convention.
CMatrix transfer_from_phases(const MommiDesign& design, const std::vector<double>& phases) {
    const int m = design.geometry.num_modes;
    const int k = design.geometry.ports;
    const RMatrix& e = design.coupling;

    CMatrix w(k, k);
    for (int nu = 0; nu < m; ++nu) {
        const cplx rot{std::cos(phases[nu]), std::sin(phases[nu])};
        for (int i = 0; i < k; ++i) {
            const double ei = e(nu, i);
            if (ei == 0.0) continue;
            const cplx row = rot * ei;
            for (int j = i; j < k; ++j) w(i, j) += row * e(nu, j);
        }
    }
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < i; ++j) w(i, j) = w(j, i); // symmetric by construction

    const cplx w00 = w(0, 0);
    const double mag = std::abs(w00);
    if (mag > 0.0) {
        const cplx rot = std::conj(w00) / mag;
        for (auto& v : w.entries()) v *= rot;
        // Exactness at (0,0): kill the rounding-level imaginary remainder.
        w(0, 0) = cplx{std::abs(w(0, 0).real()), 0.0};
    }
    return w;
}

} // namespace

CMatrix base_transfer(const MommiDesign& design) {
    std::vector<double> phases(design.geometry.num_modes);
    for (int nu = 0; nu < design.geometry.num_modes; ++nu) {
        phases[nu] = design.mode_betas[nu] * design.geometry.length_um;
    }
    return transfer_from_phases(design, phases);
}

CMatrix mommi_transfer(const MommiDesign& design, std::span<const double> eps) {
    const int d = design.pad_count();
    if (static_cast<int>(eps.size()) != d) {
        throw DimensionError("mommi_transfer: expected " + std::to_string(d) +
                             " pad drives, got " + std::to_string(eps.size()));
    }
    for (int p = 0; p < d; ++p) {
        if (!(eps[p] >= 0.0 && eps[p] <= 1.0)) {
            throw DomainError("mommi_transfer: eps[" + std::to_string(p) +
                              "] = " + std::to_string(eps[p]) + " outside [0,1]");
        }
    }

    const int m = design.geometry.num_modes;
    const double k0 = design.geometry.vacuum_wavenumber();
    const double dn = design.pads.max_index_shift;

    // Segmented propagation: pads are z-sorted and non-overlapping, so each
    // pad contributes (beta_nu + k0 Gamma eps dn) * pad_length and the gaps
    // contribute plain beta_nu * gap_length. Summing over the full [0, L]
    // makes eps = 0 reproduce base_transfer exactly.
    std::vector<double> phases(m);
    for (int nu = 0; nu < m; ++nu) {
        phases[nu] = design.mode_betas[nu] * design.geometry.length_um;
    }
    for (int p = 0; p < d; ++p) {
        const PadRect& r = design.pads.pads[p];
        const double len = r.z_end - r.z_start;
        if (eps[p] == 0.0) continue;
        const double drive = k0 * dn * eps[p] * len;
        for (int nu = 0; nu < m; ++nu) phases[nu] += design.pad_overlaps(nu, p) * drive;
    }
    return transfer_from_phases(design, phases);
}

DesignFoM evaluate_fom(const CMatrix& transfer) {
    const std::size_t k = transfer.rows();
    DesignFoM fom;
    double worst_loss = 0.0;
    double worst_imbalance = 0.0;
    for (std::size_t in = 0; in < k; ++in) {
        double total = 0.0;
        double pmax = 0.0;
        double pmin = std::numeric_limits<double>::max();
        for (std::size_t out = 0; out < k; ++out) {
            const double p = std::norm(transfer(out, in));
            total += p;
            pmax = std::max(pmax, p);
            pmin = std::min(pmin, p);
        }
        const double loss_db = -10.0 * std::log10(std::max(std::min(total, 1.0), 1e-300));
        const double imbalance_db = 10.0 * std::log10(pmax / std::max(pmin, 1e-300));
        worst_loss = std::max(worst_loss, loss_db);
        worst_imbalance = std::max(worst_imbalance, imbalance_db);
    }
    fom.insertion_loss_db = worst_loss;
    fom.imbalance_db = worst_imbalance;
    fom.fom = worst_loss * worst_imbalance;
    return fom;
}

DesignFoM evaluate_fom(const MommiDesign& design) { return evaluate_fom(base_transfer(design)); }

SearchGrid default_search_grid() {
    SearchGrid grid;
    grid.length_scales.resize(41);
    for (int i = 0; i < 41; ++i) grid.length_scales[i] = 0.8 + 0.4 * i / 40.0;
    grid.width_scales.resize(21);
    for (int i = 0; i < 21; ++i) grid.width_scales[i] = 0.8 + 0.4 * i / 20.0;
    return grid;
}

std::pair<MommiDesign, DesignFoM> design_initial_mmi(int k, int d, const SearchGrid& grid) {
    if (k < 2) throw ArgumentError("design_initial_mmi: need k >= 2");
    if (grid.length_scales.empty() || grid.width_scales.empty()) {
        throw ArgumentError("design_initial_mmi: search grid is empty");
    }

    const MmiGeometry base = default_geometry(k);

    bool have_best = false;
    double best_fom = 0.0;
    double best_length = 0.0, best_width = 0.0;
    MommiDesign best_design;
    DesignFoM best_report;

    for (double ws : grid.width_scales) {
        MmiGeometry g = base;
        g.width_um = base.width_um * ws;
        g.effective_width_um = g.width_um;
        for (int i = 0; i < k; ++i) g.port_centers_um[i] = (i + 0.5) * g.width_um / k;
        g.port_width_um = 0.7 * g.width_um / k;
        const double l0 = self_imaging_length(g, 1);
        for (double ls : grid.length_scales) {
            g.length_um = l0 * ls;
            MommiDesign candidate = build_design(g, default_pad_layout(g, d));
            const DesignFoM fom = evaluate_fom(candidate);
            const bool better =
                !have_best || fom.fom < best_fom ||
                (fom.fom == best_fom &&
                 (g.length_um < best_length ||
                  (g.length_um == best_length && g.width_um < best_width)));
            if (better) {
                have_best = true;
                best_fom = fom.fom;
                best_length = g.length_um;
                best_width = g.width_um;
                best_design = std::move(candidate);
                best_report = fom;
            }
        }
    }
    return {std::move(best_design), best_report};
}

std::pair<MommiDesign, DesignFoM> design_initial_mmi(int k, int d) {
    return design_initial_mmi(k, d, default_search_grid());
}

std::size_t MommiLut::index_of(std::span<const int> levels) const {
    if (static_cast<int>(levels.size()) != pad_count) {
        throw DimensionError("lut: expected " + std::to_string(pad_count) + " levels");
    }
    const std::size_t base = levels_per_pad();
    std::size_t idx = 0;
    for (int p = 0; p < pad_count; ++p) { // pad 0 slowest
        const int lv = levels[p];
        if (lv < 0 || static_cast<std::size_t>(lv) >= base) {
            throw DomainError("lut: level " + std::to_string(lv) + " outside [0, " +
                              std::to_string(base) + ") for pad " + std::to_string(p));
        }
        idx = idx * base + static_cast<std::size_t>(lv);
    }
    return idx;
}

const CMatrix& MommiLut::at(std::span<const int> levels) const {
    return entries[index_of(levels)];
}

double MommiLut::level_value(int level) const {
    return bits >= 1 ? static_cast<double>(level) / ((std::size_t{1} << bits) - 1) : 0.0;
}

MommiLut generate_lut(const MommiDesign& design, int bits, std::size_t entry_cap) {
    if (bits < 1 || bits > 8) {
        throw ArgumentError("generate_lut: bits must be in [1, 8], got " + std::to_string(bits));
    }
    const int d = design.pad_count();
    const std::size_t base = std::size_t{1} << bits;
    double total_d = std::pow(static_cast<double>(base), d);
    if (total_d > static_cast<double>(entry_cap)) {
        throw CapacityError("generate_lut: " + std::to_string(total_d) +
                            " entries exceed the cap of " + std::to_string(entry_cap) +
                            "; evaluate on demand via CachingMommiEvaluator instead");
    }
    const std::size_t total = static_cast<std::size_t>(total_d);

    MommiLut lut;
    lut.ports = design.ports();
    lut.pad_count = d;
    lut.bits = bits;
    lut.entries.reserve(total);

    std::vector<int> levels(d, 0);
    std::vector<double> eps(d, 0.0);
    const double step = 1.0 / static_cast<double>(base - 1);
    for (std::size_t idx = 0; idx < total; ++idx) {
        for (int p = 0; p < d; ++p) eps[p] = levels[p] * step;
        lut.entries.push_back(mommi_transfer(design, eps));
        // Lexicographic increment, pad 0 slowest.
        for (int p = d - 1; p >= 0; --p) {
            if (static_cast<std::size_t>(++levels[p]) < base) break;
            levels[p] = 0;
        }
    }
    return lut;
}

CachingMommiEvaluator::CachingMommiEvaluator(const MommiDesign& design, int bits)
    : design_(design), bits_(bits) {
    if (bits < 1 || bits > 8) {
        throw ArgumentError("CachingMommiEvaluator: bits must be in [1, 8]");
    }
}

const CMatrix& CachingMommiEvaluator::at(std::span<const int> levels) {
    const std::size_t base = std::size_t{1} << bits_;
    std::uint64_t key = 0;
    for (int lv : levels) {
        if (lv < 0 || static_cast<std::size_t>(lv) >= base) {
            throw DomainError("CachingMommiEvaluator: level outside range");
        }
        key = (key << 8) | static_cast<std::uint64_t>(lv);
    }
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    std::vector<double> eps(levels.size());
    const double step = 1.0 / static_cast<double>(base - 1);
    for (std::size_t p = 0; p < levels.size(); ++p) eps[p] = levels[p] * step;
    CMatrix w = mommi_transfer(design_, eps);
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = cache_.emplace(key, std::move(w));
    return it->second;
}

std::size_t CachingMommiEvaluator::cached() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.size();
}

} // namespace m3icro
