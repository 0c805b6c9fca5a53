#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "cli/config.hpp"
#include "cli/svg_sphere.hpp"
#include "cpulse/counting.hpp"
#include "cpulse/csv.hpp"
#include "cpulse/errors.hpp"
#include "cpulse/fidelity.hpp"
#include "cpulse/magnus.hpp"
#include "cpulse/synth.hpp"

namespace cpulse::cli {

namespace {

std::string fmt2(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
}

double wrap_degrees(double d) {
    double w = std::fmod(d, 360.0);
    if (w < 0.0) w += 360.0;
    if (w >= 359.9999999995) w = 0.0;
    return w;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write " + path.string());
    os << content;
    if (!os) throw IoError("failed writing " + path.string());
}

// Sequence files -----------------------------------------------------------------------

std::string sequence_csv(const PulseSequence& seq, const Metadata& meta) {
    std::ostringstream os;
    write_metadata(os, meta);
    os << "pulse,flip_deg,phase_deg\n";
    for (std::size_t k = 0; k < seq.size(); ++k) {
        os << k + 1 << ',' << csv::number(to_degrees(seq[k].flip)) << ','
           << csv::number(wrap_degrees(to_degrees(seq[k].phase))) << '\n';
    }
    return os.str();
}

struct SequenceFile {
    PulseSequence seq;
    std::optional<double> theta_deg;
    std::optional<double> phi_deg;
};

SequenceFile read_sequence_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot read sequence file " + path.string());
    SequenceFile file;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find(" = ");
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(2, eq - 2);
            const std::string value = line.substr(eq + 3);
            if (key == "theta_deg") file.theta_deg = csv::parse_number(value);
            if (key == "phi_deg") file.phi_deg = csv::parse_number(value);
            continue;
        }
        if (!header) {
            header = true;
            continue;
        }
        const auto fields = csv::split(line);
        if (fields.size() != 3) throw IoError("sequence file rows need 3 fields: " + path.string());
        file.seq.push_back(make_pulse(deg(csv::parse_number(fields[1])), deg(csv::parse_number(fields[2]))));
    }
    if (file.seq.empty()) throw PreconditionError("sequence file has no pulses: " + path.string());
    return file;
}

// Sequence selection shared by fidmap and traj ------------------------------------------

struct SequenceChoice {
    std::string sequence = "plain";
    std::optional<double> theta_deg;
    std::optional<double> phi_deg;
};

struct ResolvedSequence {
    std::string label;
    PulseSequence seq;
    double target_flip = 0.0;
    double target_phase = 0.0;
};

void add_sequence_options(CLI::App* sub, SequenceChoice& c) {
    sub->add_option("--sequence", c.sequence,
                    "plain | analytic | catalog name (tycko90, starcuk180, new60) | sequence CSV path")
        ->capture_default_str();
    sub->add_option("--theta", c.theta_deg, "target flip angle in degrees");
    sub->add_option("--phi", c.phi_deg, "target phase in degrees");
}

ResolvedSequence resolve_sequence(const SequenceChoice& c) {
    ResolvedSequence r;
    r.label = c.sequence;
    const double phi = deg(c.phi_deg.value_or(0.0));
    if (c.sequence == "plain" || c.sequence == "analytic") {
        if (!c.theta_deg) throw PreconditionError("--theta is required for the " + c.sequence + " sequence");
        r.target_flip = deg(*c.theta_deg);
        r.target_phase = phi;
        r.seq = c.sequence == "plain" ? PulseSequence{make_pulse(r.target_flip, phi)} : tycko_family(r.target_flip, phi);
        return r;
    }
    for (const NamedSequence& ns : named_sequences()) {
        if (ns.name != c.sequence) continue;
        if (c.theta_deg && std::abs(deg(*c.theta_deg) - ns.target_flip) > 1e-9) {
            throw PreconditionError("--theta does not match the target of " + ns.name);
        }
        r.target_flip = ns.target_flip;
        r.target_phase = c.phi_deg ? phi : ns.target_phase;
        r.seq = rephased(ns.x_referenced(), r.target_phase);
        return r;
    }
    if (!std::filesystem::exists(c.sequence)) {
        throw PreconditionError("unknown sequence '" + c.sequence + "' (not a catalog name or an existing file)");
    }
    const SequenceFile file = read_sequence_csv(c.sequence);
    const auto theta = c.theta_deg ? c.theta_deg : file.theta_deg;
    if (!theta) throw PreconditionError("--theta is required: the sequence file does not record its target");
    r.target_flip = deg(*theta);
    r.target_phase = deg(c.phi_deg ? *c.phi_deg : file.phi_deg.value_or(0.0));
    r.seq = file.seq;
    return r;
}

std::string describe(const PulseSequence& seq) {
    std::string s;
    for (std::size_t k = 0; k < seq.size(); ++k) {
        if (k) s += " ";
        s += fmt2(to_degrees(seq[k].flip)) + "@" + fmt2(wrap_degrees(to_degrees(seq[k].phase)));
    }
    return s;
}

// synth -----------------------------------------------------------------------------------

struct SynthOptions {
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    int n = 1;
    std::string family = "arccos";
    std::string refine = "none";
    std::string offsets = "0.2,-0.2";
    int max_iters = 2000;
    double tol = 1e-10;
    std::string out;
};

void register_synth(CLI::App& app, SynthOptions& o) {
    CLI::App* sub = app.add_subcommand("synth", "analytic fully-compensating three-pulse sequence");
    sub->add_option("--theta", o.theta_deg, "target flip angle in degrees, (0, 360)")->required();
    sub->add_option("--phi", o.phi_deg, "target phase in degrees")->capture_default_str();
    sub->add_option("--n", o.n, "winding number")->capture_default_str();
    sub->add_option("--family", o.family, "arccos | arcsin")
        ->check(CLI::IsMember({"arccos", "arcsin"}))
        ->capture_default_str();
    sub->add_option("--refine", o.refine, "none | first-order | offsets")
        ->check(CLI::IsMember({"none", "first-order", "offsets"}))
        ->capture_default_str();
    sub->add_option("--offsets", o.offsets, "comma-separated offset ratios for --refine offsets")->capture_default_str();
    sub->add_option("--max-iters", o.max_iters, "refinement iteration cap")->capture_default_str();
    sub->add_option("--tol", o.tol, "refinement simplex-size tolerance (radians)")->capture_default_str();
    sub->add_option("--out", o.out, "write the sequence as CSV");
}

int cmd_synth(const SynthOptions& o, std::ostream& out) {
    const Family family = o.family == "arcsin" ? Family::ArcsinZ : Family::ArccosY;
    const double theta = deg(o.theta_deg);
    const double phi = deg(o.phi_deg);
    const SynthAngles angles = synth_angles({.theta = theta, .phi = phi, .n = o.n, .family = family});
    PulseSequence seq = to_sequence(angles, phi);
    double t1 = angles.theta1, t2 = angles.theta2, t3 = angles.theta3;

    std::optional<RefineResult> refined;
    if (o.refine != "none") {
        Objective objective = FirstOrderNorm{};
        if (o.refine == "offsets") {
            FidelityAtPoints pts;
            for (const std::string& s : split_list(o.offsets)) pts.points.push_back({csv::parse_number(s), 1.0});
            if (pts.points.empty()) throw PreconditionError("--offsets lists no points");
            objective = pts;
        }
        refined = refine_search(theta, phi, objective, seq, {.max_iters = o.max_iters, .tol = o.tol});
        seq = refined->sequence;
        t1 = refined->theta1;
        t3 = refined->theta3;
        t2 = t1 + t3 - theta;
    }

    const ErrorVector fo = first_order_error(seq, ErrorGenerator::OffsetZ);
    const ErrorVector rf = first_order_error(seq, ErrorGenerator::RfScale);
    const ErrorVector rf_target = per_target_duration(rf, seq, theta);
    const Vec3 axis{std::cos(phi), std::sin(phi), 0.0};
    const double rf_along = dot(rf_target.vec(), axis);
    const double rf_transverse = (rf_target.vec() - axis * rf_along).norm();

    out << "target: theta = " << fmt2(o.theta_deg) << " deg, phi = " << fmt2(o.phi_deg) << " deg, family "
        << o.family << ", n = " << o.n << '\n';
    out << "angles (deg): " << fmt2(to_degrees(t1)) << " / " << fmt2(to_degrees(t2)) << " / " << fmt2(to_degrees(t3))
        << '\n';
    out << "phase pattern: (phi, phi + 180, phi) = (" << fmt2(wrap_degrees(o.phi_deg)) << ", "
        << fmt2(wrap_degrees(o.phi_deg + 180.0)) << ", " << fmt2(wrap_degrees(o.phi_deg)) << ")\n";
    out << "pulses:\n";
    for (std::size_t k = 0; k < seq.size(); ++k) {
        out << "  " << k + 1 << "  flip " << std::setw(8) << fmt2(to_degrees(seq[k].flip)) << "  phase " << std::setw(7)
            << fmt2(wrap_degrees(to_degrees(seq[k].phase))) << '\n';
    }
    out << std::scientific << std::setprecision(3);
    out << "first-order offset error |V0|: " << fo.norm() << '\n';
    out << "first-order rf-scale error |V0|: " << rf.norm() << " (per target duration: along-axis " << rf_along
        << ", transverse " << rf_transverse << ")\n";
    if (refined) {
        out << "refinement: objective " << refined->initial_objective << " -> " << refined->objective << " in "
            << refined->iterations << " iterations" << (refined->converged ? "" : " (not converged)") << '\n';
    }
    out << std::defaultfloat;

    if (!o.out.empty()) {
        const Metadata meta{{"command", "synth"},
                            {"theta_deg", csv::number(o.theta_deg)},
                            {"phi_deg", csv::number(o.phi_deg)},
                            {"family", o.family},
                            {"n", std::to_string(o.n)},
                            {"refine", o.refine}};
        write_file(o.out, sequence_csv(seq, meta));
        out << "wrote " << o.out << '\n';
    }
    return kExitOk;
}

// fidmap ------------------------------------------------------------------------------------

struct FidmapOptions {
    SequenceChoice choice;
    double offset_min = -1.0;
    double offset_max = 1.0;
    double rf_min = 0.5;
    double rf_max = 1.5;
    std::size_t resolution = 101;
    std::optional<std::size_t> offset_points;
    std::optional<std::size_t> rf_points;
    std::string kernel = "auto";
    std::string out = "fidmap";
};

void register_fidmap(CLI::App& app, FidmapOptions& o) {
    CLI::App* sub = app.add_subcommand("fidmap", "fidelity map over (offset, rf scale) with contour SVG");
    add_sequence_options(sub, o.choice);
    sub->add_option("--offset-min", o.offset_min)->capture_default_str();
    sub->add_option("--offset-max", o.offset_max)->capture_default_str();
    sub->add_option("--rf-min", o.rf_min)->capture_default_str();
    sub->add_option("--rf-max", o.rf_max)->capture_default_str();
    sub->add_option("--resolution", o.resolution, "points per axis")->capture_default_str();
    sub->add_option("--offset-points", o.offset_points, "points on the offset axis (overrides --resolution)");
    sub->add_option("--rf-points", o.rf_points, "points on the rf axis (overrides --resolution)");
    sub->add_option("--kernel", o.kernel, "auto | scalar | avx2")->capture_default_str();
    sub->add_option("--out", o.out, "output prefix; writes <prefix>.csv and <prefix>.svg")->capture_default_str();
}

int cmd_fidmap(const FidmapOptions& o, std::ostream& out) {
    const ResolvedSequence rs = resolve_sequence(o.choice);
    GridWindow window{o.offset_min, o.offset_max, o.rf_min, o.rf_max, o.offset_points.value_or(o.resolution),
                      o.rf_points.value_or(o.resolution)};
    const kernels::KernelKind kernel = kernels::parse_kernel(o.kernel);
    const Rotation target = ideal_target(rs.target_flip, rs.target_phase);
    const FidelityGrid grid = fidelity_grid(rs.seq, target, window, kernel);

    const double hw = level_halfwidth(grid, 1.0, 0.95);
    const Metadata meta{{"command", "fidmap"},
                        {"sequence", rs.label},
                        {"pulses_deg", describe(rs.seq)},
                        {"target_theta_deg", csv::number(to_degrees(rs.target_flip))},
                        {"target_phi_deg", csv::number(to_degrees(rs.target_phase))},
                        {"offset_range", csv::number(window.offset_min) + ".." + csv::number(window.offset_max)},
                        {"rf_range", csv::number(window.rf_min) + ".." + csv::number(window.rf_max)},
                        {"offset_points", std::to_string(window.offset_points)},
                        {"rf_points", std::to_string(window.rf_points)},
                        {"kernel", std::string(kernels::kernel_name(kernels::resolve(kernel)))},
                        {"rows", "offset ratio (Omega/w1 nominal)"},
                        {"columns", "rf ratio (w1/w1 nominal)"},
                        {"halfwidth95_at_rf1", csv::number(hw, 10)}};
    if (std::filesystem::path(o.out).has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(std::filesystem::path(o.out).parent_path(), ec);
    }
    contour_export(grid, o.out, meta);
    out << "sequence " << rs.label << ": " << describe(rs.seq) << '\n';
    out << "grid " << window.offset_points << " x " << window.rf_points << ", kernel "
        << kernels::kernel_name(kernels::resolve(kernel)) << '\n';
    out << "95% half-width in offset at rf = 1: " << csv::number(hw, 6) << '\n';
    out << "wrote " << o.out << ".csv and " << o.out << ".svg\n";
    return kExitOk;
}

// traj --------------------------------------------------------------------------------------

struct TrajOptions {
    SequenceChoice choice;
    std::optional<double> offset;
    double ppm = 2.0;
    double field_mhz = 750.0;
    double rf_khz = 10.0;
    double rf_scale = 1.0;
    std::size_t samples = 60;
    std::string initial = "0,0,1";
    std::string out = "traj";
};

void register_traj(CLI::App& app, TrajOptions& o) {
    CLI::App* sub = app.add_subcommand("traj", "Bloch-sphere trajectory of a sequence under error");
    add_sequence_options(sub, o.choice);
    sub->add_option("--offset", o.offset, "offset ratio Omega/w1 (overrides --ppm/--field/--rf-khz)");
    sub->add_option("--ppm", o.ppm, "resonance offset in ppm")->capture_default_str();
    sub->add_option("--field", o.field_mhz, "spectrometer frequency in MHz")->capture_default_str();
    sub->add_option("--rf-khz", o.rf_khz, "nominal RF amplitude in kHz")->capture_default_str();
    sub->add_option("--rf-scale", o.rf_scale, "rf ratio w1/w1 nominal")->capture_default_str();
    sub->add_option("--samples", o.samples, "samples per pulse")->capture_default_str();
    sub->add_option("--initial", o.initial, "initial Bloch vector x,y,z")->capture_default_str();
    sub->add_option("--out", o.out, "output prefix; writes <prefix>.csv and <prefix>.svg")->capture_default_str();
}

int cmd_traj(const TrajOptions& o, std::ostream& out) {
    const ResolvedSequence rs = resolve_sequence(o.choice);
    if (!o.offset && !(o.rf_khz > 0.0)) throw PreconditionError("--rf-khz must be positive");
    const double fo = o.offset ? *o.offset : o.ppm * o.field_mhz / (o.rf_khz * 1000.0);
    const ErrorPoint e{fo, o.rf_scale};
    if (!(e.rf_ratio >= 0.0)) throw PreconditionError("--rf-scale must be non-negative");

    const std::vector<std::string> parts = split_list(o.initial);
    if (parts.size() != 3) throw PreconditionError("--initial needs three comma-separated components");
    const BlochVector v0{csv::parse_number(parts[0]), csv::parse_number(parts[1]), csv::parse_number(parts[2])};
    if (v0.norm() > 1.0 + 1e-12) throw PreconditionError("--initial must lie inside the unit ball");

    const Trajectory traj = trajectory(rs.seq, e, v0, o.samples);
    const BlochVector target = apply(ideal_target(rs.target_flip, rs.target_phase), v0);
    const BlochVector& fin = traj.final_vector();
    const double miss = distance(fin, target);

    std::ostringstream csv_out;
    write_metadata(csv_out, {{"command", "traj"},
                             {"sequence", rs.label},
                             {"pulses_deg", describe(rs.seq)},
                             {"target_theta_deg", csv::number(to_degrees(rs.target_flip))},
                             {"target_phi_deg", csv::number(to_degrees(rs.target_phase))},
                             {"offset_ratio", csv::number(fo)},
                             {"rf_ratio", csv::number(o.rf_scale)},
                             {"samples_per_pulse", std::to_string(o.samples)},
                             {"initial", o.initial},
                             {"final", csv::number(fin.bx, 12) + "," + csv::number(fin.by, 12) + "," +
                                           csv::number(fin.bz, 12)},
                             {"target", csv::number(target.bx, 12) + "," + csv::number(target.by, 12) + "," +
                                            csv::number(target.bz, 12)},
                             {"distance_to_target", csv::number(miss, 12)}});
    csv_out << "segment,time_fraction,bx,by,bz\n";
    for (const TrajectorySample& s : traj.samples) {
        csv_out << s.segment << ',' << csv::number(s.time_fraction, 12) << ',' << csv::number(s.vector.bx, 15) << ','
                << csv::number(s.vector.by, 15) << ',' << csv::number(s.vector.bz, 15) << '\n';
    }
    write_file(o.out + ".csv", csv_out.str());
    write_file(o.out + ".svg", trajectory_svg(traj, target, rs.label + " at offset " + csv::number(fo, 4)));

    out << "sequence " << rs.label << ": " << describe(rs.seq) << '\n';
    out << "offset ratio " << csv::number(fo, 6) << ", rf ratio " << csv::number(o.rf_scale, 6) << '\n';
    out << "final  (" << csv::number(fin.bx, 6) << ", " << csv::number(fin.by, 6) << ", " << csv::number(fin.bz, 6)
        << ")\n";
    out << "target (" << csv::number(target.bx, 6) << ", " << csv::number(target.by, 6) << ", "
        << csv::number(target.bz, 6) << ")\n";
    out << "distance to target: " << csv::number(miss, 6) << '\n';
    out << "wrote " << o.out << ".csv and " << o.out << ".svg\n";
    return kExitOk;
}

// count -------------------------------------------------------------------------------------

struct CountOptions {
    std::string functions = "f00,f11";
    double field_mhz = 750.0;
    int r_max = 30;
    std::string subst = "none";
    std::optional<double> damping;
    std::optional<double> rf_khz;
    double ppm_sep = 1.5;
    double j_hz = 7.0;
    double rf_exponent = 1.0;
    std::string out_dir = ".";
    std::string prefix = "count";
};

void register_count(CLI::App& app, CountOptions& o) {
    CLI::App* sub = app.add_subcommand("count", "pulse-level simulation of two-spin quantum counting");
    sub->add_option("--f", o.functions, "comma-separated match functions (f00, f01, f10, f11)")->capture_default_str();
    sub->add_option("--field", o.field_mhz, "spectrometer frequency in MHz")->capture_default_str();
    sub->add_option("--rmax", o.r_max, "largest number of controlled-G applications")->capture_default_str();
    sub->add_option("--subst", o.subst, "none | tycko90 | tycko90+starcuk180 | role=name,...")->capture_default_str();
    sub->add_option("--damping", o.damping, "exponential damping per application (default 0.02)");
    sub->add_option("--rf-khz", o.rf_khz, "nominal RF amplitude in kHz (default scales with field)");
    sub->add_option("--ppm-sep", o.ppm_sep, "chemical-shift separation of the two spins in ppm")->capture_default_str();
    sub->add_option("--j", o.j_hz, "J coupling in Hz")->capture_default_str();
    sub->add_option("--rf-exponent", o.rf_exponent, "rf amplitude ~ (750 / field)^exponent")->capture_default_str();
    sub->add_option("--out-dir", o.out_dir, "directory for the trace CSVs")->capture_default_str();
    sub->add_option("--prefix", o.prefix, "file name prefix")->capture_default_str();
}

std::string file_safe(std::string s) {
    for (char& ch : s) {
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '.') ch = '_';
    }
    return s;
}

int cmd_count(const CountOptions& o, std::ostream& out) {
    if (o.r_max < 0) throw PreconditionError("--rmax must be non-negative");
    counting::ScenarioDefaults defaults;
    defaults.ppm_separation = o.ppm_sep;
    defaults.j_coupling_hz = o.j_hz;
    defaults.rf_exponent = o.rf_exponent;
    if (o.damping) defaults.damping = *o.damping;
    counting::SpinPair sp = counting::scenario(o.field_mhz, defaults);
    if (o.rf_khz) {
        sp.rf_amplitude_hz = *o.rf_khz * 1000.0;
        counting::validate(sp);
    }
    const counting::SubstitutionMap map = counting::parse_substitution(o.subst);
    const std::vector<std::string> names = split_list(o.functions);
    if (names.empty()) throw PreconditionError("--f lists no match functions");

    for (const std::string& name : names) {
        const counting::MatchFunction f = counting::parse_match(name);
        const counting::CountingTrace trace = counting::counting_trace(f, o.r_max, sp, map, o.subst);
        const double rms = counting::residual_rms(trace, sp.damping);

        std::ostringstream os;
        counting::write_trace_csv(trace, os,
                                  {{"command", "count"},
                                   {"f", name},
                                   {"field_mhz", csv::number(sp.base_frequency_mhz)},
                                   {"delta_nu_hz", csv::number(sp.delta_nu_hz)},
                                   {"j_hz", csv::number(sp.j_coupling_hz)},
                                   {"rf_amplitude_hz", csv::number(sp.rf_amplitude_hz)},
                                   {"damping", csv::number(sp.damping)},
                                   {"substitution", o.subst},
                                   {"rmax", std::to_string(o.r_max)},
                                   {"residual_rms", csv::number(rms, 10)}});
        const std::filesystem::path path = std::filesystem::path(o.out_dir) /
                                           (o.prefix + "_" + name + "_" + file_safe(sp.id) + "_" + file_safe(o.subst) +
                                            ".csv");
        write_file(path, os.str());
        out << name << " @ " << sp.id << " subst " << o.subst << ": residual RMS " << csv::number(rms, 6) << " -> "
            << path.string() << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Composite rotation design, analysis and quantum-counting simulation", "cpulse"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    SynthOptions synth;
    FidmapOptions fidmap;
    TrajOptions traj;
    CountOptions count;
    register_synth(app, synth);
    register_fidmap(app, fidmap);
    register_traj(app, traj);
    register_count(app, count);
    for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) {
        sub->add_option("--config", "flat key = value file; flags given on the command line win");
    }

    try {
        std::vector<std::string> expanded = expand_config(args);
        std::reverse(expanded.begin(), expanded.end());
        app.parse(expanded);
    } catch (const CLI::CallForHelp&) {
        const auto active = app.get_subcommands();
        out << (active.empty() ? app.help() : active.front()->help());
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (app.got_subcommand("synth")) return cmd_synth(synth, out);
        if (app.got_subcommand("fidmap")) return cmd_fidmap(fidmap, out);
        if (app.got_subcommand("traj")) return cmd_traj(traj, out);
        if (app.got_subcommand("count")) return cmd_count(count, out);
    } catch (const SingularTargetError& e) {
        err << "error: " << e.what() << " (try --family " << family_name(e.alternative()) << ")\n";
        return kExitNumeric;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitUsage;
}

}  // namespace cpulse::cli
