#include "cpulse/counting.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "cpulse/csv.hpp"
#include "cpulse/errors.hpp"
#include "cpulse/synth.hpp"

namespace cpulse::counting {

namespace {

using cd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

constexpr double kPi = std::numbers::pi;
constexpr cd kI{0.0, 1.0};

Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

Mat2 su2(const Rotation& q) {
    Mat2 u;
    u << cd(q.w(), -q.z()), cd(-q.y(), -q.x()), cd(q.y(), -q.x()), cd(q.w(), q.z());
    return u;
}

double control_sigma_x(const State& psi) {
    // <X (x) I> = 2 Re sum_b conj(psi_0b) psi_1b
    return 2.0 * (std::conj(psi(0)) * psi(2) + std::conj(psi(1)) * psi(3)).real();
}

State initial_state() {
    State psi = State::Zero();
    psi(0) = 1.0;
    return psi;
}

// z eigenvalue (+1 for |0>, -1 for |1>) of `spin` in basis index `idx`.
double zsign(int idx, int spin) {
    const int bit = spin == 0 ? (idx >> 1) & 1 : idx & 1;
    return bit == 0 ? 1.0 : -1.0;
}

}  // namespace

// Match functions ---------------------------------------------------------------------

std::string_view match_name(MatchFunction f) {
    switch (f) {
        case MatchFunction::F00: return "f00";
        case MatchFunction::F01: return "f01";
        case MatchFunction::F10: return "f10";
        case MatchFunction::F11: return "f11";
    }
    return "f00";
}

MatchFunction parse_match(std::string_view name) {
    for (MatchFunction f : kAllMatchFunctions) {
        if (match_name(f) == name) return f;
    }
    throw PreconditionError("unknown match function '" + std::string(name) + "' (expected f00, f01, f10 or f11)");
}

int match_value(MatchFunction f, int x) {
    switch (f) {
        case MatchFunction::F00: return 0;
        case MatchFunction::F01: return x == 0 ? 1 : 0;
        case MatchFunction::F10: return x == 1 ? 1 : 0;
        case MatchFunction::F11: return 1;
    }
    return 0;
}

int match_count(MatchFunction f) { return match_value(f, 0) + match_value(f, 1); }

// Spin pair ---------------------------------------------------------------------------

void validate(const SpinPair& sp) {
    const bool finite = std::isfinite(sp.base_frequency_mhz) && std::isfinite(sp.delta_nu_hz) &&
                        std::isfinite(sp.j_coupling_hz) && std::isfinite(sp.rf_amplitude_hz) &&
                        std::isfinite(sp.damping);
    if (!finite) throw PreconditionError("spin pair parameters must be finite");
    if (!(sp.rf_amplitude_hz > 0.0)) throw PreconditionError("rf amplitude must be positive");
    if (!(sp.damping >= 0.0)) throw PreconditionError("damping must be non-negative");
}

SpinPair scenario(double base_frequency_mhz, const ScenarioDefaults& d) {
    if (!(base_frequency_mhz > 0.0)) throw PreconditionError("spectrometer frequency must be positive");
    SpinPair sp;
    sp.base_frequency_mhz = base_frequency_mhz;
    sp.delta_nu_hz = 0.5 * d.ppm_separation * base_frequency_mhz;
    sp.j_coupling_hz = d.j_coupling_hz;
    sp.rf_amplitude_hz = d.reference_rf_hz * std::pow(d.reference_field_mhz / base_frequency_mhz, d.rf_exponent);
    sp.damping = d.damping;
    sp.id = csv::number(base_frequency_mhz, 6) + "MHz";
    validate(sp);
    return sp;
}

// Roles -------------------------------------------------------------------------------

std::string_view role_name(PulseRole r) {
    switch (r) {
        case PulseRole::None: return "none";
        case PulseRole::Rot90Y: return "90y";
        case PulseRole::Rot180X: return "180x";
    }
    return "none";
}

PulseRole parse_role(std::string_view name) {
    if (name == "90y") return PulseRole::Rot90Y;
    if (name == "180x") return PulseRole::Rot180X;
    throw PreconditionError("unknown pulse role '" + std::string(name) + "' (expected 90y or 180x)");
}

// Gate-level oracle -------------------------------------------------------------------

double gate_oracle(MatchFunction f, int r) {
    if (r < 0) throw PreconditionError("r must be non-negative");
    const double h = 1.0 / std::sqrt(2.0);
    Mat2 hadamard;
    hadamard << h, h, h, -h;
    Mat2 u0 = Mat2::Identity();
    u0(0, 0) = -1.0;
    Mat2 uf = Mat2::Zero();
    for (int x = 0; x < 2; ++x) uf(x, x) = (match_value(f, x) + 1) % 2 == 0 ? 1.0 : -1.0;
    const Mat2 g = hadamard * u0 * hadamard.inverse() * uf;

    Mat4 cg = Mat4::Identity();
    cg.block<2, 2>(2, 2) = g;

    Eigen::Vector2cd plus;
    plus << h, h;
    State psi;
    psi << plus(0) * plus(0), plus(0) * plus(1), plus(1) * plus(0), plus(1) * plus(1);
    for (int k = 0; k < r; ++k) psi = cg * psi;
    return control_sigma_x(psi);
}

double gate_closed_form(MatchFunction f, int r) {
    const double beta = 2.0 * std::asin(std::sqrt(match_count(f) / 2.0));
    return std::cos(r * beta);
}

// Compilation -------------------------------------------------------------------------

namespace {

constexpr int kControl = 0;
constexpr int kTarget = 1;

// Target-only rotation by `angle` about (cos axis_phase, sin axis_phase, 0). The two
// non-selective 90s cancel on the control; on the target the sandwich
// 90_y . Rz(beta) . 90_-y is a rotation by -beta about x.
void target_rotation(Program& prog, double axis_phase, double angle) {
    prog.emplace_back(FrameZ{kTarget, -axis_phase});
    prog.emplace_back(HardPulse{kPi / 2, kPi / 2, PulseRole::Rot90Y});
    prog.emplace_back(FrameZ{kTarget, -angle});
    prog.emplace_back(HardPulse{kPi / 2, -kPi / 2, PulseRole::Rot90Y});
    prog.emplace_back(FrameZ{kTarget, axis_phase});
}

// exp(-i pi/4 Zc Zt) from J evolution, offsets refocused by a pair of 180_x pulses.
void coupling_block(Program& prog, double j_hz) {
    const double tau = j_hz > 0.0 ? 1.0 / (2.0 * j_hz) : 3.0 / (2.0 * -j_hz);
    prog.emplace_back(Delay{tau / 4});
    prog.emplace_back(HardPulse{kPi, 0.0, PulseRole::Rot180X});
    prog.emplace_back(Delay{tau / 2});
    prog.emplace_back(HardPulse{kPi, 0.0, PulseRole::Rot180X});
    prog.emplace_back(Delay{tau / 4});
}

// G = exp(i alpha) R_m(pi) with m in the xy-plane at angle axis_phase.
struct Grover {
    double alpha;
    double axis_phase;
};

Grover grover_form(MatchFunction f) {
    switch (f) {
        case MatchFunction::F00: return {kPi / 2, 0.0};    // G = X
        case MatchFunction::F11: return {-kPi / 2, 0.0};   // G = -X
        case MatchFunction::F01: return {kPi, kPi / 2};    // G = iY
        case MatchFunction::F10: return {0.0, kPi / 2};    // G = -iY
    }
    return {0.0, 0.0};
}

// Controlled-G = diag(1, e^{i alpha})_c . A C-Rz(pi) A^-1, with A carrying z to the axis
// of G. C-Rz(pi) is J(pi/4) . Rz_c(pi) . Rz_t(-pi/2) up to a global phase, and the control
// phase is Rz_c(alpha) up to a global phase.
void controlled_grover(Program& prog, MatchFunction f, double j_hz) {
    const Grover g = grover_form(f);
    // A = R_{axis_phase + pi/2}(pi/2) maps z onto the in-plane axis at axis_phase.
    const double a_axis = g.axis_phase + kPi / 2;
    target_rotation(prog, a_axis, -kPi / 2);
    coupling_block(prog, j_hz);
    prog.emplace_back(FrameZ{kControl, kPi + g.alpha});
    prog.emplace_back(FrameZ{kTarget, -kPi / 2});
    target_rotation(prog, a_axis, kPi / 2);
}

}  // namespace

Program compile_counting(MatchFunction f, int r, const SpinPair& sp) {
    validate(sp);
    if (r < 0) throw PreconditionError("r must be non-negative");
    if (sp.j_coupling_hz == 0.0) throw PreconditionError("J coupling of zero cannot implement controlled gates");
    Program prog;
    prog.emplace_back(HardPulse{kPi / 2, kPi / 2, PulseRole::Rot90Y});
    for (int k = 0; k < r; ++k) controlled_grover(prog, f, sp.j_coupling_hz);
    return prog;
}

// Simulation --------------------------------------------------------------------------

SimulationResult simulate_program(const Program& prog, const SpinPair& sp) {
    validate(sp);
    const double fo = sp.delta_nu_hz / sp.rf_amplitude_hz;
    const double offset_rad = 2.0 * kPi * sp.delta_nu_hz;
    const double j_rad = 2.0 * kPi * sp.j_coupling_hz;

    SimulationResult res;
    State psi = initial_state();
    for (const Instruction& ins : prog) {
        if (const auto* hp = std::get_if<HardPulse>(&ins)) {
            if (!(hp->flip >= 0.0) || !std::isfinite(hp->phase)) throw PreconditionError("malformed hard pulse");
            const Pulse p{hp->flip, hp->phase};
            const Mat2 uc = su2(pulse_propagator(p, {fo, 1.0}));
            const Mat2 ut = su2(pulse_propagator(p, {-fo, 1.0}));
            psi = kron(uc, ut) * psi;
        } else if (const auto* d = std::get_if<Delay>(&ins)) {
            if (!(d->seconds >= 0.0)) throw PreconditionError("delay must be non-negative");
            for (int idx = 0; idx < 4; ++idx) {
                const double zc = zsign(idx, 0), zt = zsign(idx, 1);
                const double energy = offset_rad * (0.5 * zc - 0.5 * zt) + j_rad * 0.25 * zc * zt;
                psi(idx) *= std::exp(-kI * (energy * d->seconds));
            }
        } else {
            const auto& fz = std::get<FrameZ>(ins);
            if (fz.spin != 0 && fz.spin != 1) throw PreconditionError("FrameZ spin index must be 0 or 1");
            for (int idx = 0; idx < 4; ++idx) psi(idx) *= std::exp(-kI * (0.5 * fz.angle * zsign(idx, fz.spin)));
        }
        res.max_norm_error = std::max(res.max_norm_error, std::abs(1.0 - psi.norm()));
    }
    res.state = psi;
    res.intensity = control_sigma_x(psi);
    return res;
}

// Substitution ------------------------------------------------------------------------

Program substitute_composite(const Program& prog, const SubstitutionMap& map) {
    for (const auto& [role, seq] : map) {
        if (role == PulseRole::None) throw PreconditionError("untagged pulses cannot be substituted");
        if (seq.empty()) throw PreconditionError("substitution sequence is empty");
    }
    Program out;
    out.reserve(prog.size());
    for (const Instruction& ins : prog) {
        const auto* hp = std::get_if<HardPulse>(&ins);
        const auto it = hp != nullptr ? map.find(hp->role) : map.end();
        if (it == map.end()) {
            out.push_back(ins);
            continue;
        }
        for (const Pulse& p : it->second) out.emplace_back(HardPulse{p.flip, p.phase + hp->phase, PulseRole::None});
    }
    return out;
}

SubstitutionMap parse_substitution(std::string_view spec) {
    SubstitutionMap map;
    if (spec.empty() || spec == "none") return map;
    std::size_t start = 0;
    while (start <= spec.size()) {
        const std::size_t end = spec.find_first_of(",+", start);
        const std::string_view item = spec.substr(start, end == std::string_view::npos ? spec.npos : end - start);
        if (item.empty()) throw PreconditionError("empty entry in substitution list");
        const std::size_t eq = item.find('=');
        if (eq != std::string_view::npos) {
            map[parse_role(item.substr(0, eq))] = named_sequence(item.substr(eq + 1)).x_referenced();
        } else {
            const NamedSequence& ns = named_sequence(item);
            PulseRole role = PulseRole::None;
            if (std::abs(ns.target_flip - kPi / 2) < 1e-12) role = PulseRole::Rot90Y;
            if (std::abs(ns.target_flip - kPi) < 1e-12) role = PulseRole::Rot180X;
            if (role == PulseRole::None) {
                throw PreconditionError("sequence '" + std::string(item) + "' has no default role; use role=name");
            }
            map[role] = ns.x_referenced();
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return map;
}

// Traces ------------------------------------------------------------------------------

CountingTrace counting_trace(MatchFunction f, int r_max, const SpinPair& sp, const SubstitutionMap& map,
                             std::string_view substitution_label) {
    if (r_max < 0) throw PreconditionError("r_max must be non-negative");
    validate(sp);
    CountingTrace trace;
    trace.f = f;
    trace.scenario_id = sp.id;
    trace.substitution = std::string(substitution_label);

    double reference = 1.0;
    for (int r = 0; r <= r_max; ++r) {
        const Program prog = substitute_composite(compile_counting(f, r, sp), map);
        const double raw = simulate_program(prog, sp).intensity;
        if (r == 0) {
            if (std::abs(raw) < 1e-12) throw NumericError("r = 0 intensity vanishes; cannot normalise");
            reference = raw;
        }
        trace.points.push_back({r, raw / reference * std::exp(-sp.damping * r)});
    }
    return trace;
}

double residual_rms(const CountingTrace& trace, double damping) {
    if (trace.points.empty()) return 0.0;
    double sum = 0.0;
    for (const TracePoint& p : trace.points) {
        const double ideal = gate_closed_form(trace.f, p.r) * std::exp(-damping * p.r);
        sum += (p.intensity - ideal) * (p.intensity - ideal);
    }
    return std::sqrt(sum / static_cast<double>(trace.points.size()));
}

void write_trace_csv(const CountingTrace& trace, std::ostream& os, const Metadata& meta) {
    write_metadata(os, meta);
    os << "# normalization = " << trace.normalization << '\n';
    os << "r,intensity,f,scenario\n";
    for (const TracePoint& p : trace.points) {
        os << p.r << ',' << csv::number(p.intensity, 15) << ',' << match_name(trace.f) << ','
           << csv::escape(trace.scenario_id) << '\n';
    }
}

}  // namespace cpulse::counting
