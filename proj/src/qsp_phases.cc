// Copyright 2026 The qsvt_ir Authors
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

#include "qsvt_ir/qsp_phases.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace qsvt_ir {

namespace {

using std::numbers::pi;

struct Mat2 {
    Complex a00, a01, a10, a11;
};

Mat2 operator*(const Mat2 &l, const Mat2 &r) {
    return Mat2{
        l.a00 * r.a00 + l.a01 * r.a10,
        l.a00 * r.a01 + l.a01 * r.a11,
        l.a10 * r.a00 + l.a11 * r.a10,
        l.a10 * r.a01 + l.a11 * r.a11,
    };
}

Mat2 z_phase(double phi) {
    return Mat2{std::polar(1.0, phi), 0, 0, std::polar(1.0, -phi)};
}

double checked_sqrt_complement(double x) {
    if (!(std::abs(x) <= 1)) {
        throw std::domain_error("signal value must satisfy |x| <= 1");
    }
    return std::sqrt(std::max(0.0, 1 - x * x));
}

double wrap_angle(double a) {
    a = std::remainder(a, 2 * pi);
    return a <= -pi ? a + 2 * pi : a;
}

// Symmetric W(x)-convention fit: psi_j = free[min(j, d-j)], j = 0..d.
class SymmetricQspObjective {
   public:
    SymmetricQspObjective(size_t degree, std::vector<double> nodes, std::vector<double> targets)
        : d_(degree), nodes_(std::move(nodes)), targets_(std::move(targets)), prefix_(degree + 1), suffix_(degree + 1) {
    }

    size_t num_free() const {
        return d_ / 2 + 1;
    }

    std::vector<double> expand(const std::vector<double> &free) const {
        std::vector<double> psi(d_ + 1);
        for (size_t j = 0; j <= d_; j++) {
            psi[j] = free[std::min(j, d_ - j)];
        }
        return psi;
    }

    /// Node residuals Re U_00(x_k) - P(x_k); fills the row-major Jacobian when given.
    std::vector<double> evaluate(const std::vector<double> &free, std::vector<double> *jacobian) {
        evaluations++;
        std::vector<double> psi = expand(free);
        std::vector<Mat2> e(d_ + 1);
        for (size_t j = 0; j <= d_; j++) {
            e[j] = z_phase(psi[j]);
        }
        size_t n = num_free();
        if (jacobian) {
            jacobian->assign(nodes_.size() * n, 0.0);
        }
        std::vector<double> res(nodes_.size());
        for (size_t k = 0; k < nodes_.size(); k++) {
            double x = nodes_[k];
            double s = checked_sqrt_complement(x);
            Mat2 w{x, Complex(0, s), Complex(0, s), x};
            prefix_[0] = e[0];
            for (size_t j = 1; j <= d_; j++) {
                prefix_[j] = prefix_[j - 1] * w * e[j];
            }
            res[k] = prefix_[d_].a00.real() - targets_[k];
            if (!jacobian) {
                continue;
            }
            suffix_[d_] = Mat2{1, 0, 0, 1};
            for (size_t j = d_; j-- > 0;) {
                suffix_[j] = w * e[j + 1] * suffix_[j + 1];
            }
            for (size_t j = 0; j <= d_; j++) {
                Complex z = prefix_[j].a00 * suffix_[j].a00 - prefix_[j].a01 * suffix_[j].a10;
                // d/dpsi_j Re U_00 = Re(i z) = -Im z
                (*jacobian)[k * n + std::min(j, d_ - j)] += -z.imag();
            }
        }
        return res;
    }

    size_t evaluations = 0;

   private:
    size_t d_;
    std::vector<double> nodes_;
    std::vector<double> targets_;
    std::vector<Mat2> prefix_;
    std::vector<Mat2> suffix_;
};

double sum_squares(const std::vector<double> &v) {
    double acc = 0;
    for (double x : v) {
        acc += x * x;
    }
    return acc;
}

double max_abs(const std::vector<double> &v) {
    double acc = 0;
    for (double x : v) {
        acc = std::max(acc, std::abs(x));
    }
    return acc;
}

// Solves J step = -res for the square Jacobian by partially pivoted elimination;
// false when J is numerically singular.
bool newton_step(std::vector<double> jacobian, const std::vector<double> &res, std::vector<double> &step) {
    size_t n = res.size();
    step.resize(n);
    for (size_t i = 0; i < n; i++) {
        step[i] = -res[i];
    }
    double scale = max_abs(jacobian);
    for (size_t c = 0; c < n; c++) {
        size_t piv = c;
        for (size_t r = c + 1; r < n; r++) {
            if (std::abs(jacobian[r * n + c]) > std::abs(jacobian[piv * n + c])) {
                piv = r;
            }
        }
        if (!(std::abs(jacobian[piv * n + c]) > 1e-14 * scale)) {
            return false;
        }
        if (piv != c) {
            for (size_t k = 0; k < n; k++) {
                std::swap(jacobian[c * n + k], jacobian[piv * n + k]);
            }
            std::swap(step[c], step[piv]);
        }
        for (size_t r = c + 1; r < n; r++) {
            double f = jacobian[r * n + c] / jacobian[c * n + c];
            for (size_t k = c; k < n; k++) {
                jacobian[r * n + k] -= f * jacobian[c * n + k];
            }
            step[r] -= f * step[c];
        }
    }
    for (size_t c = n; c-- > 0;) {
        for (size_t k = c + 1; k < n; k++) {
            step[c] -= jacobian[c * n + k] * step[k];
        }
        step[c] /= jacobian[c * n + c];
    }
    return true;
}

double node_verification_residual(const PhaseVector &phases, const ChebyshevSeries &target) {
    size_t d = target.degree();
    double worst = 0;
    for (size_t k = 0; k <= d; k++) {
        double x = std::cos((2.0 * static_cast<double>(k) + 1) * pi / (4.0 * static_cast<double>(d)));
        worst = std::max(worst, std::abs(signal_polynomial(x, phases) - clenshaw_eval(target, x)));
    }
    return worst;
}

std::string format_residual(double r) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", r);
    return buf;
}

}  // namespace

PhaseFindingError::PhaseFindingError(const std::string &what, double final_residual, size_t evaluations)
    : std::runtime_error(what + " (final residual " + format_residual(final_residual) + ", " +
                         std::to_string(evaluations) + " evaluations)"),
      final_residual(final_residual),
      evaluations(evaluations) {
}

ComplexMatrix signal_unitary(double x, const PhaseVector &phases) {
    if (phases.convention_tag != kConventionTag) {
        throw std::invalid_argument("phase convention '" + phases.convention_tag + "' is not " + std::string(kConventionTag));
    }
    double s = checked_sqrt_complement(x);
    Mat2 r{x, s, s, -x};
    Mat2 acc{1, 0, 0, 1};
    for (double phi : phases.phases) {
        acc = acc * z_phase(phi) * r;
    }
    return ComplexMatrix(2, 2, {acc.a00, acc.a01, acc.a10, acc.a11});
}

double signal_polynomial(double x, const PhaseVector &phases) {
    return signal_unitary(x, phases)(0, 0).real();
}

Complex wx_signal_entry(double x, const std::vector<double> &wx_phases) {
    double s = checked_sqrt_complement(x);
    Mat2 w{x, Complex(0, s), Complex(0, s), x};
    Mat2 acc = z_phase(wx_phases.empty() ? 0.0 : wx_phases[0]);
    for (size_t j = 1; j < wx_phases.size(); j++) {
        acc = acc * w * z_phase(wx_phases[j]);
    }
    return acc.a00;
}

PhaseVector phases_from_wx_convention(const std::vector<double> &wx_phases) {
    if (wx_phases.size() < 2) {
        throw std::invalid_argument("W(x)-convention phases need degree >= 1");
    }
    // R(x) = -i e^{i pi/4 Z} W(x) e^{i pi/4 Z}; the outer phases only contribute a global
    // phase to the (0,0) entry, which is folded into the first reflection phase.
    size_t d = wx_phases.size() - 1;
    PhaseVector out;
    out.phases.resize(d);
    out.phases[0] = wrap_angle(wx_phases[0] + wx_phases[d] + static_cast<double>(d - 1) * pi / 2);
    for (size_t k = 1; k < d; k++) {
        out.phases[k] = wrap_angle(wx_phases[k] - pi / 2);
    }
    return out;
}

PhaseVector find_phases(const ChebyshevSeries &target, double tol) {
    PhaseFindOptions opts;
    opts.tol = tol;
    return find_phases(target, opts, nullptr);
}

PhaseVector find_phases(const ChebyshevSeries &target, const PhaseFindOptions &options, PhaseFindReport *report) {
    if (target.parity() == Parity::none) {
        throw std::invalid_argument("find_phases requires a definite-parity target");
    }
    size_t d = target.degree();
    if (d < 1) {
        throw std::invalid_argument("find_phases requires degree >= 1");
    }
    if ((d % 2 == 1) != (target.parity() == Parity::odd)) {
        throw std::invalid_argument("target degree parity disagrees with declared parity");
    }
    double peak = max_abs_on_interval(target, -1, 1);
    if (peak > 1 - 1e-8) {
        throw std::invalid_argument("find_phases requires max |P| <= 1 - 1e-8 on [-1, 1] (got " + std::to_string(peak) + ")");
    }

    size_t n_free = d / 2 + 1;
    std::vector<double> nodes(n_free);
    std::vector<double> targets(n_free);
    for (size_t k = 0; k < n_free; k++) {
        nodes[k] = std::cos((2.0 * static_cast<double>(k) + 1) * pi / (4.0 * static_cast<double>(n_free)));
        targets[k] = clenshaw_eval(target, nodes[k]);
    }
    SymmetricQspObjective obj(d, nodes, targets);

    std::vector<double> x(n_free, 0.0);
    x[0] = pi / 4;
    std::vector<double> jac;
    std::vector<double> res = obj.evaluate(x, &jac);
    double loss = sum_squares(res);

    const double stop = 0.1 * options.tol;
    size_t iteration = 0;
    std::vector<double> step;
    while (max_abs(res) > stop && obj.evaluations < options.max_evaluations) {
        iteration++;
        if (!newton_step(jac, res, step)) {
            break;
        }
        // Backtrack on the squared mismatch; full steps are accepted near the solution.
        bool improved = false;
        double t = 1;
        for (int k = 0; k < 40 && obj.evaluations < options.max_evaluations; k++, t *= 0.5) {
            std::vector<double> trial = x;
            for (size_t i = 0; i < n_free; i++) {
                trial[i] += t * step[i];
            }
            std::vector<double> trial_res = obj.evaluate(trial, nullptr);
            double trial_loss = sum_squares(trial_res);
            if (trial_loss < (1 - 1e-4 * t) * loss) {
                x = std::move(trial);
                improved = true;
                break;
            }
        }
        if (!improved) {
            break;
        }
        res = obj.evaluate(x, &jac);
        loss = sum_squares(res);
    }

    PhaseVector out = phases_from_wx_convention(obj.expand(x));
    double verified = node_verification_residual(out, target);
    if (report) {
        report->evaluations = obj.evaluations;
        report->iterations = iteration;
        report->node_residual = verified;
    }
    if (!(verified <= options.tol)) {
        throw PhaseFindingError("phase finding did not reach tolerance", verified, obj.evaluations);
    }
    return out;
}

double verify_phases(const PhaseVector &phases, const ChebyshevSeries &target, size_t grid) {
    if (grid == 0) {
        return 0;
    }
    double worst = 0;
    for (size_t k = 0; k < grid; k++) {
        double x = grid == 1 ? -1.0 : -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(grid - 1);
        x = std::clamp(x, -1.0, 1.0);
        worst = std::max(worst, std::abs(signal_polynomial(x, phases) - clenshaw_eval(target, x)));
    }
    return worst;
}

}  // namespace qsvt_ir
