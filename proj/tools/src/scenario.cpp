#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <cgur/parallel.hpp>

#include "scenario.hpp"

namespace cgur::cli {

namespace {

using Marginal = std::variant<GaussianMarginal, GridDensity, PdfFunction>;

// A state reduced to what the evaluators need.
struct Source {
    std::optional<GaussianState> gaussian;
    std::optional<FockSuperposition> fock;
    std::optional<GridWavefunction> grid;
    int n_modes = 1;
    double hbar = 1.0;
};

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k) m(i, k) = rows[i][k];
    return m;
}

GaussianState gaussian_of(const StateSpec& s) {
    if (const auto* g = std::get_if<GaussianPreset>(&s)) {
        GaussianState base = g->preset == "thermal"    ? GaussianState::thermal(g->nbar, g->hbar)
                             : g->preset == "squeezed" ? GaussianState::squeezed(g->r, g->theta, g->hbar, g->q, g->p)
                                                       : GaussianState::vacuum(1, g->hbar);
        if (g->preset == "squeezed") return base;
        Eigen::VectorXd mean(2);
        mean << g->q, g->p;
        return GaussianState(mean, base.cov(), base.system());
    }
    if (const auto* g = std::get_if<GaussianExplicit>(&s)) {
        Eigen::VectorXd mean = Eigen::Map<const Eigen::VectorXd>(g->mean.data(), static_cast<Eigen::Index>(g->mean.size()));
        return GaussianState(mean, to_matrix(g->cov), ModeSystem(static_cast<int>(g->mean.size() / 2), g->hbar));
    }
    if (const auto* t = std::get_if<TmsvSpec>(&s)) return two_mode_squeezed(t->r, t->hbar).state();
    throw std::runtime_error("state is not Gaussian");
}

Source make_source(const StateSpec& s) {
    Source src;
    if (const auto* f = std::get_if<FockSpec>(&s)) {
        std::vector<cplx> c;
        for (const auto& re_im : f->coefficients) c.emplace_back(re_im[0], re_im[1]);
        double norm = 0.0;
        for (const auto& z : c) norm += std::norm(z);
        if (!(norm > 0)) throw std::runtime_error("fock_superposition: all coefficients vanish");
        for (auto& z : c) z /= std::sqrt(norm);
        src.fock.emplace(std::move(c), f->hbar);
        src.hbar = f->hbar;
        return src;
    }
    if (const auto* g = std::get_if<GridCsv>(&s)) {
        src.grid.emplace(load_grid_csv(g->path, g->hbar));
        src.hbar = g->hbar;
        return src;
    }
    src.gaussian.emplace(gaussian_of(s));
    src.n_modes = src.gaussian->n_modes();
    src.hbar = src.gaussian->hbar();
    return src;
}

// Marginal of d^T x. Single-mode non-Gaussian states go through a rotation and a rescaling.
Marginal marginal(const Source& src, const QuadratureCoeffs& d) {
    if (src.gaussian) return gaussian_marginal(*src.gaussian, d);
    if (d.dim() != 2) throw std::runtime_error("non-Gaussian states are single-mode; pair must have 2 coefficients");
    const double a = d.d()(0), b = d.d()(1);
    const double c = std::hypot(a, b);
    const double theta = std::atan2(b, a);
    if (src.fock) {
        PdfFunction base = PdfFunction::of(*src.fock, theta);
        auto f = base.pdf;
        return PdfFunction{[f, c](double u) { return f(u / c) / c; }, base.lo * c, base.hi * c, base.scale * c};
    }
    GridDensity rho = GridDensity::from(theta == 0.0 ? *src.grid : frft(*src.grid, theta));
    if (c == 1.0) return rho;
    std::vector<double> v(rho.values().begin(), rho.values().end());
    for (auto& x : v) x /= c;
    GridSpec g{rho.grid().n, rho.grid().x0 * c, rho.grid().dx * c};
    return GridDensity(std::move(v), g, rho.hbar());
}

double mean_of(const Marginal& m) {
    return std::visit(
        [](const auto& x) -> double {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, GaussianMarginal>) return x.mean;
            else if constexpr (std::is_same_v<T, GridDensity>) return x.mean();
            else return moments(x).mean;
        },
        m);
}

double variance_of(const Marginal& m) {
    return std::visit(
        [](const auto& x) -> double {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, GaussianMarginal>) return x.variance;
            else if constexpr (std::is_same_v<T, GridDensity>) return x.variance();
            else return moments(x).variance;
        },
        m);
}

double entropy_of(const Marginal& m, RenyiOrder order) {
    return std::visit([&](const auto& x) { return differential_entropy(x, order); }, m);
}

DiscreteDistribution binned(const Marginal& m, const StandardCG& cg) {
    return std::visit([&](const auto& x) { return bin_probabilities(x, cg); }, m);
}

URReport entropy_variance_of(const Marginal& m) {
    return std::visit([](const auto& x) { return entropy_variance_bound(x); }, m);
}

QuadraturePair make_pair(const PairSpec& p, int n_modes) {
    if (p.canonical) return QuadraturePair::canonical(0, n_modes);
    auto vec = [](const std::vector<double>& v) {
        return QuadratureCoeffs(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    };
    if (static_cast<int>(p.du.size()) != 2 * n_modes)
        throw ConfigError("pair.du", "length must be " + std::to_string(2 * n_modes) + " for this state");
    return p.cco ? QuadraturePair::declared_cco(vec(p.du), vec(p.dv)) : QuadraturePair::general(vec(p.du), vec(p.dv));
}

bool is_witness(const std::string& k) { return k.rfind("witness_", 0) == 0; }
bool is_coarse(const std::string& k) { return k.rfind("cg_", 0) == 0 || k == "witness_cg_variance" || k == "witness_naive" || k == "witness_entropy"; }

struct Widths {
    double delta;
    double small_delta;
    std::optional<double> u_cen;
    std::optional<double> v_cen;
};

struct Point {
    std::size_t index;
    Widths widths;
    std::optional<double> gamma;  // as requested by a Gamma sweep, free of the sqrt round trip
};

double standard_delta(const std::optional<CGSpec>& s, const char* where) {
    if (!s) throw ConfigError(where, "a standard coarse graining is required by the requested kinds");
    const auto* st = std::get_if<StandardSpec>(&*s);
    if (!st) throw ConfigError(where, "periodic coarse graining is not supported by the requested kinds");
    return st->delta;
}

std::optional<double> standard_centre(const std::optional<CGSpec>& s) {
    if (!s) return std::nullopt;
    const auto* st = std::get_if<StandardSpec>(&*s);
    return st ? st->u_cen : std::nullopt;
}

class Evaluator {
public:
    Evaluator(const ScenarioConfig& cfg, const Source* src) : cfg_(cfg), src_(src), orders_(cfg.alpha) {
        if (!src_) return;
        for (const auto& k : cfg.urs) needs_two_mode_ = needs_two_mode_ || is_witness(k);
        for (const auto& k : cfg.urs) needs_single_ = needs_single_ || (!is_witness(k) && k != "bounds");
        if (needs_single_) {
            pair_.emplace(make_pair(cfg.pair, src_->n_modes));
            mu_.emplace(marginal(*src_, pair_->du()));
            mv_.emplace(marginal(*src_, pair_->dv()));
        }
        if (needs_two_mode_) {
            if (!src_->gaussian || src_->n_modes != 2) throw std::runtime_error("witness kinds need a two-mode Gaussian state");
            tm_.emplace(*src_->gaussian);
            gop_.emplace(GlobalOperatorPair::position_momentum(cfg.witness_sign));
        }
    }

    // |gamma| used to turn Gamma into bin widths.
    double gamma_abs() const {
        if (pair_) return std::abs(pair_->gamma());
        if (gop_) return std::abs(gop_->gamma_eff());
        return 1.0;
    }
    double hbar() const { return src_ ? src_->hbar : 1.0; }

    std::vector<URReport> evaluate(const Widths& w) const {
        std::vector<URReport> out;
        for (const auto& kind : cfg_.urs) {
            try {
                evaluate_kind(kind, w, out);
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception& e) {
                throw std::runtime_error("evaluating " + kind + ": " + e.what());
            }
        }
        return out;
    }

private:
    void evaluate_kind(const std::string& kind, const Widths& w, std::vector<URReport>& out) const {
        const double hb = hbar();
        if (kind == "bounds") return;
        if (kind == "heisenberg" || kind == "linear") {
            const double vu = variance_of(*mu_), vv = variance_of(*mv_);
            out.push_back(kind == "heisenberg" ? heisenberg_ur(vu, vv, pair_->gamma(), hb)
                                               : linear_ur(vu, vv, pair_->gamma(), hb));
        } else if (kind == "schrodinger" || kind == "bona_fide" || kind == "det_cov") {
            if (!src_->gaussian) throw std::runtime_error("needs a Gaussian state");
            if (kind == "bona_fide") out.push_back(bona_fide_check(*src_->gaussian));
            else if (kind == "det_cov") out.push_back(det_cov_check(*src_->gaussian, 0));
            else out.push_back(schrodinger_ur(*src_->gaussian, 0));
        } else if (kind == "shannon") {
            out.push_back(shannon_ur(entropy_of(*mu_, RenyiOrder::shannon()), entropy_of(*mv_, RenyiOrder::shannon()),
                                     pair_->gamma(), hb));
        } else if (kind == "renyi") {
            out.push_back(renyi_ur(entropy_of(*mu_, orders_.order_u()), entropy_of(*mv_, orders_.order_v()), orders_,
                                   *pair_, hb));
        } else if (kind == "entropy_variance") {
            out.push_back(entropy_variance_of(*mu_));
        } else if (kind == "cg_entropic" || kind == "cg_variance") {
            CGPair cgp(w.delta, w.small_delta, *pair_, hb);
            auto du = binned(*mu_, StandardCG(w.delta, w.u_cen.value_or(mean_of(*mu_))));
            auto dv = binned(*mv_, StandardCG(w.small_delta, w.v_cen.value_or(mean_of(*mv_))));
            if (kind == "cg_entropic") {
                auto r = cg_entropic_ur(du, dv, cgp, orders_);
                out.push_back(std::move(r.discrete));
                out.push_back(std::move(r.continuous));
                out.push_back(std::move(r.bialynicki));
            } else {
                out.push_back(cg_variance_ur(discrete_variance(du), discrete_variance(dv), cgp));
            }
        } else if (kind == "cg_K") {
            CGPair cgp(w.delta, w.small_delta, *pair_, hb);
            auto du = binned(*mu_, StandardCG(w.delta, mean_of(*mu_)));
            auto dv = binned(*mv_, StandardCG(w.small_delta, mean_of(*mv_)));
            out.push_back(cg_K_ur(discrete_variance(du), discrete_variance(dv), cgp));
        } else if (kind == "witness_variance") {
            push(witness_variance(*tm_, *gop_), out);
        } else if (kind == "witness_cg_variance") {
            push(witness_variance(*tm_, *gop_, BinWidths{w.delta, w.small_delta}), out);
        } else if (kind == "witness_naive") {
            push(naive_binned_variance_witness(*tm_, *gop_, BinWidths{w.delta, w.small_delta}), out);
        } else if (kind == "witness_entropy") {
            push(witness_entropy(*tm_, *gop_, BinWidths{w.delta, w.small_delta}), out);
        }
    }

    static void push(WitnessResult r, std::vector<URReport>& out) {
        r.report.annotations.push_back(r.entangled ? "entangled" : "not flagged");
        out.push_back(std::move(r.report));
        for (auto& c : r.companions) {
            c.annotations.push_back("companion");
            out.push_back(std::move(c));
        }
    }

    const ScenarioConfig& cfg_;
    const Source* src_;
    ConjugatePair orders_;
    bool needs_two_mode_ = false;
    bool needs_single_ = false;
    std::optional<QuadraturePair> pair_;
    std::optional<Marginal> mu_, mv_;
    std::optional<TwoModeGaussian> tm_;
    std::optional<GlobalOperatorPair> gop_;
};

std::string bounds_table(const std::vector<double>& gammas, double alpha) {
    const ConjugatePair orders(alpha);
    std::ostringstream os;
    os << "Gamma,eps_alpha,cg_entropic,cg_entropic_bialynicki,shannon_limit,cg_K,half_R00_sq\n";
    for (double g : gammas) {
        const double x = g / 4.0;
        const double half_r = 0.5 * r00(x) * r00(x);
        os << format_double(g) << ',' << format_double(eps_alpha(alpha, x)) << ','
           << format_double(cg_entropic_bound(g, orders)) << ',' << format_double(cg_entropic_bound_bialynicki(g, orders))
           << ',' << format_double(std::log(std::numbers::pi * std::numbers::e / g)) << ','
           << format_double(cg_K_bound(g)) << ',' << format_double(half_r) << '\n';
    }
    return os.str();
}

} // namespace

TwoModeGaussian two_mode_state(const StateSpec& s) {
    GaussianState g = gaussian_of(s);
    if (g.n_modes() != 2) throw std::runtime_error("expected a two-mode state");
    return TwoModeGaussian(std::move(g));
}

GridWavefunction load_grid_csv(const std::filesystem::path& path, double hbar) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<double> xs;
    std::vector<cplx> psi;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> cols;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                cols.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                numeric = false;
            }
        }
        if (!numeric) {
            if (xs.empty()) continue;  // header
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": non-numeric value");
        }
        if (cols.size() < 2 || cols.size() > 3)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected x, re[, im]");
        xs.push_back(cols[0]);
        psi.emplace_back(cols[1], cols.size() == 3 ? cols[2] : 0.0);
    }
    if (xs.size() < 16) throw std::runtime_error(path.string() + ": need at least 16 samples");
    const double dx = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (std::abs(xs[i] - xs[i - 1] - dx) > 1e-6 * std::abs(dx))
            throw std::runtime_error(path.string() + ": samples must be uniformly spaced");
    GridSpec g{xs.size(), xs.front() - 0.5 * dx, dx};
    return GridWavefunction::normalized(std::move(psi), g, hbar);
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    std::optional<Source> src;
    if (cfg.state) src.emplace(make_source(*cfg.state));

    bool wants_bounds = false, wants_state = false, wants_cg = false;
    for (const auto& k : cfg.urs) {
        wants_bounds = wants_bounds || k == "bounds";
        wants_state = wants_state || k != "bounds";
        wants_cg = wants_cg || is_coarse(k);
    }
    if (wants_state && !src) throw ConfigError("state", "required by the requested kinds");

    const Evaluator eval(cfg, src ? &*src : nullptr);

    // Points of the sweep, or the single configured point.
    std::vector<Point> points;
    if (cfg.sweep && cfg.sweep->gamma) {
        for (int i = 0; i < cfg.sweep->gamma->steps; ++i) {
            const double g = cfg.sweep->gamma->at(i);
            const double w = std::sqrt(g * eval.hbar() * eval.gamma_abs());
            points.push_back({points.size(), {w, w, std::nullopt, std::nullopt}, g});
        }
    } else if (cfg.sweep) {
        for (int i = 0; i < cfg.sweep->delta->steps; ++i)
            for (int k = 0; k < cfg.sweep->small_delta->steps; ++k)
                points.push_back({points.size(),
                                  {cfg.sweep->delta->at(i), cfg.sweep->small_delta->at(k), standard_centre(cfg.cg_u),
                                   standard_centre(cfg.cg_v)},
                                  std::nullopt});
    } else {
        Widths w{1.0, 1.0, std::nullopt, std::nullopt};
        if (wants_cg) {
            w.delta = standard_delta(cfg.cg_u, "cg.u");
            w.small_delta = standard_delta(cfg.cg_v, "cg.v");
            w.u_cen = standard_centre(cfg.cg_u);
            w.v_cen = standard_centre(cfg.cg_v);
        }
        points.push_back({0, w, std::nullopt});
    }

    ScenarioResult result;
    if (wants_state) {
        std::vector<std::vector<URReport>> per_point(points.size());
        parallel_for(points.size(), [&](std::size_t i) { per_point[i] = eval.evaluate(points[i].widths); });

        std::ostringstream table;
        table << "index,delta,small_delta,Gamma,kind,lhs,bound,margin,verdict\n";
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto& w = points[i].widths;
            const double gamma_cap =
                points[i].gamma.value_or(w.delta * w.small_delta / (eval.hbar() * eval.gamma_abs()));
            for (auto& r : per_point[i]) {
                table << i << ',' << format_double(w.delta) << ',' << format_double(w.small_delta) << ','
                      << format_double(gamma_cap) << ',' << r.kind << ',' << format_double(r.lhs) << ','
                      << format_double(r.bound) << ',' << format_double(r.margin) << ',' << to_string(r.verdict)
                      << '\n';
                result.reports.push_back(std::move(r));
            }
        }
        result.table_csv = table.str();
    }
    if (wants_bounds) {
        std::vector<double> gammas;
        for (const auto& p : points)
            gammas.push_back(p.gamma.value_or(p.widths.delta * p.widths.small_delta / (eval.hbar() * eval.gamma_abs())));
        result.table_csv = bounds_table(gammas, cfg.alpha);
    }
    return result;
}

std::vector<std::filesystem::path> write_artifacts(const ScenarioConfig& cfg, const ScenarioResult& result,
                                                   const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    const auto reports = dir / cfg.outputs.reports;
    {
        std::ofstream out(reports, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + reports.string());
        for (const auto& r : result.reports) out << to_json(r).dump() << '\n';
    }
    written.push_back(reports);
    if (!result.table_csv.empty()) {
        const auto table = dir / cfg.outputs.table;
        std::ofstream out(table, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + table.string());
        out << result.table_csv;
        written.push_back(table);
    }
    return written;
}

} // namespace cgur::cli
