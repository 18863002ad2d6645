// psmkit command-line driver. Every subcommand reads and writes the library's
// JSON/CSV/PGM formats; exit status is 0 on success, 1 on a runtime error and
// 2 on a usage error.
#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "psmkit/calibration.hpp"
#include "psmkit/camera.hpp"
#include "psmkit/chain.hpp"
#include "psmkit/error.hpp"
#include "psmkit/experiments.hpp"
#include "psmkit/handeye.hpp"
#include "psmkit/io.hpp"
#include "psmkit/offset_analysis.hpp"

namespace {

using namespace psmkit;
using nlohmann::json;

constexpr int kUsageError = 2;

KinematicChain chain_from(const std::string& path) {
    return path.empty() ? bundled_psm_chain() : load_chain_file(path);
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text << (text.empty() || text.back() != '\n' ? "\n" : "");
    else
        io::write_text_file(out_path, text);
}

std::uint64_t seed_or_env(std::optional<std::uint64_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("PSMKIT_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

JointVector to_joint_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json matrix_json(const HomogeneousTransform& t) {
    const Eigen::Matrix4d m = t.matrix();
    json out = json::array();
    for (int i = 0; i < 4; ++i) out.push_back({m(i, 0), m(i, 1), m(i, 2), m(i, 3)});
    return out;
}

std::vector<std::vector<double>> read_csv(const std::string& path, std::size_t columns, const char* what) {
    auto rows = io::parse_numeric_csv(io::read_text_file(path));
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].size() != columns)
            throw ParseError(std::string(what) + " row " + std::to_string(i),
                             "expected " + std::to_string(columns) + " columns");
    return rows;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"psmkit: PSM kinematics, sensor calibration and offset-error analysis"};
    app.require_subcommand(1);

    // fk
    auto* fk = app.add_subcommand("fk", "Forward kinematics for one joint configuration");
    std::string fk_chain, fk_q, fk_out;
    fk->add_option("--chain", fk_chain, "Robot description JSON (default: bundled PSM)");
    fk->add_option("--q", fk_q, "Comma-separated joint values (rad / m)")->required();
    fk->add_option("--out", fk_out, "Output JSON path (default: stdout)");

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "Sensor calibration procedures");
    cal->require_subcommand(1);
    auto* cal_scale = cal->add_subcommand("scale", "Potentiometer scale k_P from (E, P) samples");
    std::string scale_samples;
    double scale_k_e = 0.0, scale_min_sweep = kDefaultMinScaleSweep;
    cal_scale->add_option("--samples", scale_samples, "CSV with columns E,P")->required();
    cal_scale->add_option("--k-e", scale_k_e, "Encoder scale (rad/count)")->required();
    cal_scale->add_option("--min-sweep", scale_min_sweep, "Minimum voltage sweep (V)");

    auto* cal_offset = cal->add_subcommand("offset", "Potentiometer offset b_P at the zero position");
    double off_k_p = 0.0;
    std::optional<double> off_p;
    std::string off_readings;
    cal_offset->add_option("--k-p", off_k_p, "Potentiometer scale")->required();
    auto* off_p_opt = cal_offset->add_option("--p", off_p, "Voltage at the zero position");
    auto* off_r_opt = cal_offset->add_option("--readings", off_readings, "CSV of repeated zero-position voltages");
    off_p_opt->excludes(off_r_opt);

    auto* cal_enc = cal->add_subcommand("encoder", "Encoder offset b_E at power-on");
    double enc_k_e = 0.0, enc_k_p = 0.0, enc_p = 0.0, enc_b_p = 0.0;
    long long enc_e = 0;
    cal_enc->add_option("--k-e", enc_k_e)->required();
    cal_enc->add_option("--e", enc_e, "Encoder count")->required();
    cal_enc->add_option("--k-p", enc_k_p)->required();
    cal_enc->add_option("--p", enc_p, "Potentiometer voltage")->required();
    cal_enc->add_option("--b-p", enc_b_p)->required();

    auto* cal_nl = cal->add_subcommand("nonlinearity", "Fit a potentiometer correction table");
    std::string nl_pairs, nl_mode = "linear", nl_out;
    cal_nl->add_option("--pairs", nl_pairs, "CSV with columns reference,measured")->required();
    cal_nl->add_option("--mode", nl_mode, "linear or spline")->check(CLI::IsMember({"linear", "spline"}));
    cal_nl->add_option("--out", nl_out, "Output JSON path");

    auto* cal_bp3 = cal->add_subcommand("bp3", "Simulate the RCM reference-point search for b_P3");
    std::string bp3_chain, bp3_out;
    double bp3_error = 0.0;
    Bp3SearchOptions bp3_opts;
    cal_bp3->add_option("--chain", bp3_chain, "Robot description JSON (default: bundled PSM)");
    cal_bp3->add_option("--error", bp3_error, "Injected insertion offset error (m)")->required();
    cal_bp3->add_option("--range", bp3_opts.search_range, "Search half-width (m)");
    cal_bp3->add_option("--tol", bp3_opts.tol, "Tolerance (m)");
    cal_bp3->add_option("--out", bp3_out, "Output JSON path");

    // verify
    auto* verify = app.add_subcommand("verify", "Check beta_E ~ beta_P across joint configurations");
    std::string ver_cal, ver_truth, ver_configs, ver_out;
    double ver_threshold = kDefaultSafetyThreshold;
    std::optional<std::uint64_t> ver_seed;
    verify->add_option("--calibration", ver_cal, "Calibration JSON used to decode readings")->required();
    verify->add_option("--truth", ver_truth, "Calibration JSON used to simulate readings (default: same)");
    verify->add_option("--configs", ver_configs, "CSV, one joint configuration per row")->required();
    verify->add_option("--threshold", ver_threshold, "Pass threshold (rad)");
    verify->add_option("--seed", ver_seed, "Noise seed (default: $PSMKIT_SEED or 0)");
    verify->add_option("--out", ver_out, "Output JSON path");

    // offset-analysis
    auto* offa = app.add_subcommand("offset-analysis", "Realignment constancy test for potentiometer offset errors");
    std::string offa_chain, offa_delta, offa_out;
    int offa_depth = kMaxRealignmentDepth;
    double offa_tol = kDefaultConstancyTolerance;
    offa->add_option("--chain", offa_chain, "Robot description JSON (default: bundled PSM)");
    offa->add_option("--delta", offa_delta, "Comma-separated offset errors for joints 1..n")->required();
    offa->add_option("--depth", offa_depth, "Realignment depth (1-3)")->check(CLI::Range(1, 3));
    offa->add_option("--tolerance", offa_tol, "Constancy tolerance (Frobenius)");
    offa->add_option("--out", offa_out, "Write the full report (with matrices) to this path");

    // handeye
    auto* he = app.add_subcommand("handeye", "AX = XB hand-eye calibration");
    he->require_subcommand(1);
    auto* he_solve = he->add_subcommand("solve", "Solve AX = XB from a motion-pair file");
    std::string he_pairs, he_out;
    double he_min_axis = kDefaultAxisSeparation;
    he_solve->add_option("--pairs", he_pairs, "Motion-pair JSON")->required();
    he_solve->add_option("--min-axis-angle", he_min_axis, "Degeneracy threshold (rad)");
    he_solve->add_option("--out", he_out, "Output JSON path");
    auto* he_gen = he->add_subcommand("generate", "Generate a synthetic motion-pair dataset");
    std::string gen_x, gen_out;
    DatasetOptions gen_opts;
    std::optional<std::uint64_t> gen_seed;
    he_gen->add_option("--x", gen_x, "True X as 4x4 JSON (default: a fixed example transform)");
    he_gen->add_option("--n", gen_opts.n_motions, "Number of motions");
    he_gen->add_flag("--rcm", gen_opts.rcm_constrained, "RCM-constrained robot motions");
    he_gen->add_flag("--insertion-only", gen_opts.insertion_only, "With --rcm: pure insertions (degenerate)");
    he_gen->add_option("--rot-std", gen_opts.noise.rot_std, "Rotation noise (rad)");
    he_gen->add_option("--trans-std", gen_opts.noise.trans_std, "Translation noise (m)");
    he_gen->add_option("--seed", gen_seed, "Seed (default: $PSMKIT_SEED or 0)");
    he_gen->add_option("--out", gen_out, "Output JSON path");

    // camera
    auto* cam = app.add_subcommand("camera", "Camera calibration verification utilities");
    cam->require_subcommand(1);
    auto* cam_lines = cam->add_subcommand("check-lines", "Straight-line distortion check");
    std::string lines_camera, lines_points;
    double lines_tol = 0.5;
    cam_lines->add_option("--camera", lines_camera, "Camera JSON")->required();
    cam_lines->add_option("--points", lines_points, "CSV x,y,z of collinear points (camera frame, m)")->required();
    cam_lines->add_option("--tolerance", lines_tol, "Pass tolerance (px)");
    auto* cam_rows = cam->add_subcommand("check-rows", "Rectified row-alignment check");
    std::string rows_rig, rows_matches;
    double rows_threshold = 1.0;
    cam_rows->add_option("--rig", rows_rig, "Stereo rig JSON")->required();
    cam_rows->add_option("--matches", rows_matches, "CSV uL,vL,uR,vR")->required();
    cam_rows->add_option("--threshold", rows_threshold, "Pass threshold (px)");
    auto* cam_dei = cam->add_subcommand("deinterlace", "Drop one field and interpolate the other");
    std::string dei_in, dei_out, dei_field = "even";
    cam_dei->add_option("--in", dei_in, "Input PGM (P5)")->required();
    cam_dei->add_option("--out", dei_out, "Output PGM (P5)")->required();
    cam_dei->add_option("--field", dei_field, "Field to keep: even or odd")->check(CLI::IsMember({"even", "odd"}));
    auto* cam_reproj = cam->add_subcommand("reproj", "RMS reprojection error with outlier flags");
    std::string reproj_camera, reproj_corr;
    cam_reproj->add_option("--camera", reproj_camera, "Camera JSON")->required();
    cam_reproj->add_option("--correspondences", reproj_corr, "CSV X,Y,Z,u,v")->required();

    // trajectory-rmse
    auto* traj = app.add_subcommand("trajectory-rmse", "Tip RMSE caused by a joint 2 offset error");
    std::string traj_chain, traj_e2 = "0,1,2,3", traj_out, traj_json;
    traj->add_option("--chain", traj_chain, "Robot description JSON (default: bundled PSM)");
    traj->add_option("--e2", traj_e2, "Comma-separated e2 values (deg)");
    traj->add_option("--out", traj_out, "Output CSV path (default: stdout)");
    traj->add_option("--json", traj_json, "Also write JSON to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kUsageError;
    }

    try {
        if (*fk) {
            const auto chain = chain_from(fk_chain);
            const auto result = forward_kinematics(chain, to_joint_vector(io::parse_number_list(fk_q)));
            json doc;
            doc["tip"] = matrix_json(result.tip);
            doc["frames"] = json::array();
            for (const auto& f : result.frames) doc["frames"].push_back(matrix_json(f));
            emit(fk_out, doc.dump(2));
        } else if (*cal_scale) {
            std::vector<ScaleCalibrationSample> samples;
            for (const auto& row : read_csv(scale_samples, 2, "samples"))
                samples.push_back({static_cast<std::int64_t>(std::llround(row[0])), row[1],
                                   std::to_string(samples.size())});
            emit("", json{{"k_P", calibrate_pot_scale(samples, scale_k_e, scale_min_sweep)}}.dump(2));
        } else if (*cal_offset) {
            double b_p = 0.0;
            if (off_p) {
                b_p = calibrate_pot_offset_zero(off_k_p, *off_p);
            } else if (!off_readings.empty()) {
                std::vector<double> readings;
                for (const auto& row : read_csv(off_readings, 1, "readings")) readings.push_back(row[0]);
                b_p = calibrate_pot_offset_zero(off_k_p, readings);
            } else {
                std::cerr << "error: calibrate offset needs --p or --readings\n";
                return kUsageError;
            }
            emit("", json{{"b_P", b_p}}.dump(2));
        } else if (*cal_enc) {
            emit("", json{{"b_E", calibrate_encoder_offset(enc_k_e, enc_e, enc_k_p, enc_p, enc_b_p)}}.dump(2));
        } else if (*cal_nl) {
            std::vector<std::pair<double, double>> pairs;
            for (const auto& row : read_csv(nl_pairs, 2, "pairs")) pairs.emplace_back(row[0], row[1]);
            const auto table = fit_nonlinearity_table(
                pairs, nl_mode == "spline" ? Interpolation::CubicSpline : Interpolation::Linear);
            json doc;
            doc["interpolation"] = nl_mode;
            doc["nonlinearity_knots"] = json::array();
            for (const auto& [in, out] : table.knots()) doc["nonlinearity_knots"].push_back({in, out});
            emit(nl_out, doc.dump(2));
        } else if (*cal_bp3) {
            const auto chain = chain_from(bp3_chain);
            const auto sweep = default_rcm_sweep();
            emit(bp3_out, io::bp3_result_to_json(calibrate_bp3_rcm(chain, bp3_error, sweep, bp3_opts), bp3_error));
        } else if (*verify) {
            const auto calibrated = io::parse_calibration(io::read_text_file(ver_cal));
            const auto truth = ver_truth.empty() ? calibrated : io::parse_calibration(io::read_text_file(ver_truth));
            std::vector<JointVector> configs;
            for (const auto& row : io::parse_numeric_csv(io::read_text_file(ver_configs)))
                configs.push_back(to_joint_vector(row));
            const auto report = verify_calibration(truth.actuators, calibrated.actuators, configs,
                                                   calibrated.coupling, ver_threshold, seed_or_env(ver_seed));
            emit(ver_out, io::verification_report_to_json(report));
        } else if (*offa) {
            const auto chain = chain_from(offa_chain);
            const auto d = io::parse_number_list(offa_delta);
            const OffsetErrorVector delta = to_joint_vector(d);
            const auto samples = default_constancy_samples(chain);
            const auto report = constancy_test(chain, delta, samples, offa_tol, offa_depth);
            std::cout << "is_constant=" << (report.is_constant ? "true" : "false")
                      << " spread=" << io::format_double(report.spread) << " samples=" << report.samples
                      << " tolerance=" << io::format_double(report.tolerance) << "\n";
            if (!offa_out.empty())
                io::write_text_file(offa_out, io::constancy_report_to_json(report, chain, delta, samples, offa_depth));
        } else if (*he_solve) {
            const auto pairs = io::parse_motion_pairs(io::read_text_file(he_pairs));
            emit(he_out, io::handeye_result_to_json(solve_ax_xb(pairs, he_min_axis)));
        } else if (*he_gen) {
            const HomogeneousTransform x =
                gen_x.empty() ? HomogeneousTransform(rotation_exp(Eigen::Vector3d(0.3, -0.2, 0.5)),
                                                     Eigen::Vector3d(0.05, -0.1, 0.3))
                              : io::parse_transform(io::read_text_file(gen_x));
            gen_opts.seed = seed_or_env(gen_seed);
            emit(gen_out, io::motion_pairs_to_json(generate_handeye_dataset(x, gen_opts), gen_opts.seed));
        } else if (*cam_lines) {
            const auto camera = io::parse_camera(io::read_text_file(lines_camera));
            std::vector<Eigen::Vector3d> pts;
            for (const auto& row : read_csv(lines_points, 3, "points")) pts.emplace_back(row[0], row[1], row[2]);
            const auto r = straight_line_check(camera, pts, lines_tol);
            emit("", json{{"max_deviation", r.max_deviation}, {"pass", r.pass}}.dump(2));
        } else if (*cam_rows) {
            const auto rig = io::parse_stereo_rig(io::read_text_file(rows_rig));
            std::vector<StereoMatch> matches;
            for (const auto& row : read_csv(rows_matches, 4, "matches"))
                matches.push_back({Pixel(row[0], row[1]), Pixel(row[2], row[3])});
            const auto r = rectified_row_check(rig, matches, rows_threshold);
            emit("", json{{"max_row_difference", r.max_row_difference}, {"pass", r.pass}}.dump(2));
        } else if (*cam_dei) {
            write_pgm(dei_out, deinterlace(read_pgm(dei_in), dei_field == "even" ? Field::Even : Field::Odd));
        } else if (*cam_reproj) {
            const auto camera = io::parse_camera(io::read_text_file(reproj_camera));
            std::vector<Correspondence> corr;
            for (const auto& row : read_csv(reproj_corr, 5, "correspondences"))
                corr.push_back({Eigen::Vector3d(row[0], row[1], row[2]), Pixel(row[3], row[4])});
            const auto r = reprojection_error(camera, corr);
            emit("", json{{"rms", r.rms}, {"residuals", r.residuals}, {"outliers", r.outliers}}.dump(2));
        } else if (*traj) {
            const auto chain = chain_from(traj_chain);
            const auto results = trajectory_rmse_experiment(chain, io::parse_number_list(traj_e2));
            emit(traj_out, io::rmse_results_to_csv(results));
            if (!traj_json.empty()) io::write_text_file(traj_json, io::rmse_results_to_json(results, chain.name()));
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
