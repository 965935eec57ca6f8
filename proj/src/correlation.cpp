#include "vic/correlation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace vic {

std::string to_string(FitStatus status) {
    switch (status) {
        case FitStatus::Converged: return "converged";
        case FitStatus::MaxIterations: return "max_iterations";
        case FitStatus::IllConditioned: return "IllConditioned";
        case FitStatus::NoDescent: return "NoDescent";
        case FitStatus::OutOfBounds: return "OutOfBounds";
        case FitStatus::Overlap: return "OverlapError";
    }
    return "unknown";
}

namespace {

struct MeshTables {
    Eigen::VectorXd r, wr, ws, l, dl;
};

MeshTables mesh_tables(const Beam& beam, double L) {
    MeshTables t;
    t.r = beam.r_nodes();
    t.wr = beam.r_weights();
    t.ws = beam.s_weights(L);
    t.l.resize(beam.n_r);
    t.dl.resize(beam.n_r);
    for (int j = 0; j < beam.n_r; ++j) {
        t.l(j) = luminance(t.r(j), beam.R);
        t.dl(j) = luminance_slope(t.r(j), beam.R);
    }
    return t;
}

// Shared pass over the mesh. Computes per-station residual integrals always and,
// when `grad` / `normal` are requested, the exact gradient and the Gram matrix.
struct MeshPass {
    Eigen::VectorXd station_phi;
    double phi = 0.0;
    Eigen::VectorXd gradient;  // dPhi/dV, all components
    Eigen::MatrixXd gram;      // all components
};

MeshPass mesh_pass(const Raster& raster, const Shape& p, const Basis& basis, const Beam& beam, bool derivatives) {
    const Kinematics kin = beam_kinematics(p, basis, beam.n_s, derivatives);
    check_no_overlap(kin, beam.R);
    const MeshTables t = mesh_tables(beam, p.L);
    const int ns = beam.n_s;
    const int nr = beam.n_r;
    const int dof = p.dof();

    MeshPass out;
    out.station_phi.resize(ns);
    Eigen::MatrixXd proj;  // nu_i . dx/dV_k
    if (derivatives) {
        out.gradient.setZero(dof);
        out.gram.setZero(dof, dof);
        proj.resize(ns, dof);
        for (int k = 0; k < dof; ++k) {
            proj.col(k) = kin.nu.col(0).cwiseProduct(kin.dx[k].col(0)) + kin.nu.col(1).cwiseProduct(kin.dx[k].col(1));
        }
    }

    Eigen::Vector2d grad_f;
    for (int i = 0; i < ns; ++i) {
        const Eigen::Vector2d x = kin.x.row(i).transpose();
        const Eigen::Vector2d nu = kin.nu.row(i).transpose();
        const Eigen::Vector2d tau = kin.tau.row(i).transpose();
        const double gamma = kin.gamma(i);
        double station = 0.0;
        double gram_weight = 0.0;         // sum_j l'^2 dS / ws_i
        Eigen::Vector2d G = Eigen::Vector2d::Zero();  // sum_j 2 e w grad f
        double H = 0.0;                   // sum_j 2 e w r (grad f . tau)
        double K = 0.0;                   // sum_j e^2 r wr
        for (int j = 0; j < nr; ++j) {
            const double r = t.r(j);
            const Eigen::Vector2d X = x + r * nu;
            const double f = derivatives ? raster.sample(X, grad_f) : raster.sample(X);
            const double e = f - t.l(j);
            const double metric = 1.0 - gamma * r;
            const double w = metric * t.wr(j);
            station += e * e * w;
            if (derivatives) {
                gram_weight += t.dl(j) * t.dl(j) * w;
                G += (2.0 * e * w) * grad_f;
                H += 2.0 * e * w * r * grad_f.dot(tau);
                K += e * e * r * t.wr(j);
            }
        }
        out.station_phi(i) = station;
        out.phi += t.ws(i) * station;
        if (derivatives) {
            const double wsi = t.ws(i);
            for (int k = 0; k < dof; ++k) {
                const Eigen::Vector2d dx(kin.dx[k](i, 0), kin.dx[k](i, 1));
                out.gradient(k) += wsi * (G.dot(dx) - H * kin.dtheta(i, k) - K * kin.dgamma(i, k));
            }
            out.gram.selfadjointView<Eigen::Lower>().rankUpdate(proj.row(i).transpose(), wsi * gram_weight);
        }
    }
    if (derivatives) out.gram = out.gram.selfadjointView<Eigen::Lower>();
    return out;
}

}  // namespace

double phi(const Raster& raster, const Shape& p, const Basis& basis, const Beam& beam) {
    return mesh_pass(raster, p, basis, beam, false).phi;
}

PhiProfile phi_per_station(const Raster& raster, const Shape& p, const Basis& basis, const Beam& beam) {
    MeshPass pass = mesh_pass(raster, p, basis, beam, false);
    PhiProfile out;
    out.phi = std::move(pass.station_phi);
    out.s_weights = beam.s_weights(p.L);
    out.s.resize(beam.n_s);
    for (int i = 0; i < beam.n_s; ++i) out.s(i) = (i == beam.n_s - 1) ? p.L : i * beam.ds(p.L);
    return out;
}

Eigen::VectorXd phi_gradient(const Raster& raster, const Shape& p, const Basis& basis, const Beam& beam) {
    return mesh_pass(raster, p, basis, beam, true).gradient;
}

NormalSystem assemble(const Raster& raster, const Shape& p, const Basis& basis, const Beam& beam,
                      const std::vector<bool>& frozen) {
    const int dof = p.dof();
    if (!frozen.empty() && static_cast<int>(frozen.size()) != dof) {
        throw ConfigError("freeze mask has " + std::to_string(frozen.size()) + " entries, expected " +
                          std::to_string(dof));
    }
    const MeshPass pass = mesh_pass(raster, p, basis, beam, true);
    NormalSystem sys;
    sys.phi = pass.phi;
    for (int k = 0; k < dof; ++k) {
        if (frozen.empty() || !frozen[k]) sys.free_index.push_back(k);
    }
    const int nf = static_cast<int>(sys.free_index.size());
    sys.M.resize(nf, nf);
    sys.rhs.resize(nf);
    for (int a = 0; a < nf; ++a) {
        sys.rhs(a) = -0.5 * pass.gradient(sys.free_index[a]);
        for (int b = 0; b < nf; ++b) sys.M(a, b) = pass.gram(sys.free_index[a], sys.free_index[b]);
    }
    return sys;
}

double scaled_condition(const Eigen::MatrixXd& M, const Eigen::VectorXd& scale) {
    if (!M.allFinite()) return std::numeric_limits<double>::infinity();
    const Eigen::VectorXd d = scale.size() == 0 ? Eigen::VectorXd::Ones(M.rows()) : scale;
    const Eigen::MatrixXd scaled = d.asDiagonal() * M * d.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scaled, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

Eigen::VectorXd dimensionless_scale(const std::vector<int>& free_index, double L) {
    Eigen::VectorXd d(static_cast<Eigen::Index>(free_index.size()));
    for (std::size_t a = 0; a < free_index.size(); ++a) {
        const int k = free_index[a];
        d(static_cast<Eigen::Index>(a)) = k < 2 ? L : (k == 2 ? 1.0 : 1.0 / L);
    }
    return d;
}

Step step(const Eigen::MatrixXd& M, const Eigen::VectorXd& rhs, double max_condition, const Eigen::VectorXd& scale,
          int basis_order) {
    Step out;
    out.condition = scaled_condition(M, scale);
    if (!(out.condition <= max_condition)) {
        std::string what = "normal matrix condition " + std::to_string(out.condition) + " exceeds " +
                           std::to_string(max_condition);
        if (basis_order >= 0) what += " at basis order N=" + std::to_string(basis_order) + "; lower the order";
        throw IllConditioned(what);
    }
    // Solve in the equilibrated variables; the scaling leaves the solution unchanged.
    const Eigen::VectorXd d = M.diagonal().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd scaled = d.asDiagonal() * M * d.asDiagonal();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(scaled);
    out.delta = d.asDiagonal() * ldlt.solve(d.asDiagonal() * rhs);
    return out;
}

std::vector<bool> freeze_mask(const std::vector<std::string>& names, int dof) {
    std::vector<bool> mask(dof, false);
    for (const auto& name : names) {
        bool found = false;
        for (int k = 0; k < dof; ++k) {
            if (param_name(k) == name) {
                mask[k] = true;
                found = true;
            }
        }
        if (!found) throw ConfigError("cannot freeze unknown parameter '" + name + "'");
    }
    return mask;
}

FitReport fit(const Raster& raster, const Shape& p0, const Basis& basis, const Beam& beam, const FitOptions& options) {
    if (!(options.rel_tol > 0.0)) throw ConfigError("rel_tol must be positive");
    const int dof = p0.dof();
    const std::vector<bool> frozen = options.frozen.empty() ? std::vector<bool>(dof, false) : options.frozen;
    if (static_cast<int>(frozen.size()) != dof) throw ConfigError("freeze mask length does not match the shape");
    if (std::all_of(frozen.begin(), frozen.end(), [](bool b) { return b; })) {
        throw ConfigError("every parameter is frozen; nothing to fit");
    }

    FitReport report;
    report.params = p0;

    auto fail = [&](FitStatus status, const std::string& message) {
        report.status = status;
        report.message = message;
        report.converged = false;
        return report;
    };

    // Evaluates the system at p, mapping geometric failures onto a status.
    auto try_assemble = [&](const Shape& p, FitStatus& status, std::string& message) -> std::optional<NormalSystem> {
        try {
            return assemble(raster, p, basis, beam, frozen);
        } catch (const OutOfBounds& e) {
            status = FitStatus::OutOfBounds;
            message = e.what();
        } catch (const OverlapError& e) {
            status = FitStatus::Overlap;
            message = e.what();
        }
        return std::nullopt;
    };

    FitStatus status{};
    std::string message;
    std::optional<NormalSystem> sys = try_assemble(p0, status, message);
    if (!sys) return fail(status, message);

    Shape current = p0;
    double current_phi = sys->phi;
    const double phi_first = current_phi;
    report.phi_history.push_back(current_phi);
    if (phi_first == 0.0) {
        report.status = FitStatus::Converged;
        report.converged = true;
        return report;
    }

    Shape best = current;
    double best_phi = current_phi;

    for (int it = 1; it <= options.max_iters; ++it) {
        report.iterations = it;
        const Eigen::VectorXd units = dimensionless_scale(sys->free_index, current.L);
        report.condition_estimate = scaled_condition(sys->M, units);
        Step st;
        try {
            st = step(sys->M, sys->rhs, options.max_condition, units, basis.order());
        } catch (const IllConditioned& e) {
            report.params = best;
            std::string what = e.what();
            // M only sees normal motion, so sliding along the curve is a null direction.
            if (!frozen[0] && !frozen[1]) what += " (x0 is fully free: freeze the x0 component along the fiber)";
            return fail(FitStatus::IllConditioned, what);
        }

        Eigen::VectorXd full_delta = Eigen::VectorXd::Zero(dof);
        for (std::size_t a = 0; a < sys->free_index.size(); ++a) full_delta(sys->free_index[a]) = st.delta(a);
        const Eigen::VectorXd base = current.as_vector();
        // Predicted decrease of the quadratic model, used to tell a stalled optimum from a failure.
        const double predicted = st.delta.dot(sys->rhs);

        std::optional<NormalSystem> trial_sys;
        Shape trial;
        double scale = 1.0;
        FitStatus trial_status{};
        std::string trial_message;
        const int attempts = options.backtracking ? options.max_halvings + 1 : 1;
        for (int h = 0; h < attempts; ++h, scale *= 0.5) {
            Eigen::VectorXd v = base + scale * full_delta;
            for (int k = 0; k < dof; ++k) {
                if (frozen[k]) v(k) = base(k);
            }
            trial = Shape::from_vector(v, current.L);
            trial_sys = try_assemble(trial, trial_status, trial_message);
            if (!trial_sys) {
                if (!options.backtracking) {
                    report.params = best;
                    return fail(trial_status, trial_message);
                }
                continue;
            }
            if (!options.backtracking || trial_sys->phi <= current_phi) break;
            trial_sys.reset();
        }

        if (!trial_sys) {
            report.params = best;
            if (predicted <= 0.5 * options.rel_tol * phi_first) {
                report.status = FitStatus::Converged;
                report.converged = true;
                return report;
            }
            return fail(FitStatus::NoDescent, "no decrease of Phi after " + std::to_string(options.max_halvings) +
                                                  " step halvings");
        }

        const double previous_phi = current_phi;
        current = trial;
        current_phi = trial_sys->phi;
        sys = std::move(trial_sys);
        report.phi_history.push_back(current_phi);
        report.step_norms.push_back(scale * full_delta.norm());
        if (current_phi <= best_phi) {
            best = current;
            best_phi = current_phi;
        }
        if (std::abs(previous_phi - current_phi) / phi_first < options.rel_tol) {
            report.params = best;
            report.status = FitStatus::Converged;
            report.converged = true;
            return report;
        }
    }
    report.params = best;
    report.status = FitStatus::MaxIterations;
    report.message = "iteration limit reached";
    return report;
}

}  // namespace vic
