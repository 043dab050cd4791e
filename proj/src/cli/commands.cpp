#include "cndisc/cli/commands.hpp"

#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cndisc/bspline.hpp"
#include "cndisc/cli/csv_io.hpp"
#include "cndisc/cli/report_io.hpp"
#include "cndisc/cli/svg_plot.hpp"
#include "cndisc/error.hpp"
#include "cndisc/synthetic.hpp"

namespace cndisc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

DetectorConfig DetectorFlags::resolve() const {
    if (order < 1) {
        throw InvalidArgument("--order must be >= 1");
    }
    DetectorConfig cfg;
    cfg.approx = ApproxConfig::defaults(order);
    cfg.approx.degree_left = degree_left.value_or(order);
    cfg.approx.degree_right = degree_right.value_or(order);
    const ApproxConfig base = ApproxConfig::defaults(std::max(cfg.approx.degree_left, cfg.approx.degree_right));
    cfg.approx.support_left = support_left.value_or(std::max(cfg.approx.support_left, base.support_left));
    cfg.approx.support_right = support_right.value_or(std::max(cfg.approx.support_right, base.support_right));
    cfg.approx.normalize_x = normalize_x;
    cfg.sigma = sigma;
    cfg.confidence = confidence;
    cfg.min_separation = min_separation;
    cfg.threads = threads;
    cfg.validate();
    return cfg;
}

DetectorFlags DetectorFlags::from_config(const DetectorConfig& cfg) {
    DetectorFlags f;
    f.order = cfg.approx.order;
    f.degree_left = cfg.approx.degree_left;
    f.degree_right = cfg.approx.degree_right;
    f.support_left = cfg.approx.support_left;
    f.support_right = cfg.approx.support_right;
    f.sigma = cfg.sigma;
    f.confidence = cfg.confidence;
    f.min_separation = cfg.min_separation;
    f.normalize_x = cfg.approx.normalize_x;
    f.threads = cfg.threads;
    return f;
}

namespace {

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Path of `target` as seen from the directory holding `anchor`.
std::string relative_to(const fs::path& target, const fs::path& anchor) {
    const fs::path base = fs::absolute(anchor).parent_path();
    const fs::path rel = fs::absolute(target).lexically_normal().lexically_relative(base.lexically_normal());
    return rel.empty() ? fs::absolute(target).string() : rel.generic_string();
}

fs::path resolve_from(const fs::path& stored, const fs::path& anchor) {
    if (stored.is_absolute()) {
        return stored;
    }
    return fs::absolute(anchor).parent_path() / stored;
}

fs::path default_profile_path(const fs::path& report) {
    fs::path p = report;
    p.replace_filename(report.stem().string() + "_profile.csv");
    return p;
}

void add_detector_flags(CLI::App* app, DetectorFlags& f) {
    app->add_option("--order", f.order, "Derivative order n of the sought discontinuity")->capture_default_str();
    app->add_option("--degree-left", f.degree_left, "Left polynomial degree (default: order)");
    app->add_option("--degree-right", f.degree_right, "Right polynomial degree (default: order)");
    app->add_option("--support-left", f.support_left, "Left support length in samples (default: max(8, 2(n+1)))");
    app->add_option("--support-right", f.support_right, "Right support length in samples");
    app->add_option("--sigma", f.sigma, "Known observation noise (default: estimated)");
    app->add_option("--confidence", f.confidence, "Two-sided significance level")->capture_default_str();
    app->add_option("--min-separation", f.min_separation, "Peak radius in profile indices (0: max support)")
        ->capture_default_str();
    app->add_flag("--normalize-x", f.normalize_x, "Rescale each window's abscissae to [-1, 1]");
    app->add_option("--threads", f.threads, "Worker threads for the scan (0: all cores)")->capture_default_str();
}

}  // namespace

void cmd_detect(const DetectOptions& opts, std::ostream& log) {
    const DetectorConfig cfg = opts.flags.resolve();
    const SampleSeries series = series_from_table(read_csv(opts.input), opts.x_col, opts.y_col);
    const DetectionReport report = detect(series, cfg);

    const fs::path profile_path = opts.profile.value_or(default_profile_path(opts.out));
    write_profile_csv(profile_path, report.profile);
    const json input{{"path", opts.input.generic_string()}, {"x_col", opts.x_col}, {"y_col", opts.y_col}};
    write_text(opts.out, dump(report_to_json(report, relative_to(profile_path, opts.out), input)));
    if (opts.plot) {
        write_text(*opts.plot, render_svg(series, report.profile, report.knots));
    }
    log << "detected " << report.knots.size() << " knot(s) over " << report.profile.size()
        << " interstitial points; sigma=" << format_double(report.sigma) << "\n";
}

void cmd_synth(const SynthOptions& opts, std::ostream& log) {
    if (!(opts.sigma >= 0.0)) {
        throw InvalidArgument("--sigma must be >= 0");
    }
    if (opts.num_points < 2) {
        throw InvalidArgument("--num-points must be >= 2");
    }
    const PiecewisePoly poly = make_test_signal();
    const SampleSeries series = add_noise(sample(poly, opts.num_points), opts.sigma, opts.seed);
    write_series_csv(opts.out, series);
    log << "wrote " << series.size() << " samples to " << opts.out.string() << "\n";
}

void cmd_montecarlo(const MonteCarloOptions& opts, std::ostream& log) {
    if (opts.m < 1) {
        throw InvalidArgument("--m must be >= 1");
    }
    if (!(opts.sigma >= 0.0)) {
        throw InvalidArgument("--sigma must be >= 0");
    }
    DetectorConfig cfg = opts.flags.resolve();
    cfg.sigma.reset();
    const MonteCarloSummary s =
        run_monte_carlo(static_cast<std::size_t>(opts.m), opts.sigma, opts.num_points, cfg, opts.seed, opts.threads);
    write_text(opts.out, dump(summary_to_json(s)));
    for (const auto& k : s.knots) {
        log << "knot " << format_double(k.true_location) << ": detection rate " << format_double(k.detection_rate)
            << ", mean error " << format_double(k.mean_error) << " +- " << format_double(k.half_width) << "\n";
    }
}

void cmd_plot(const PlotOptions& opts, std::ostream& log) {
    const StoredReport report = read_report(opts.report);
    const auto profile = read_profile_csv(resolve_from(report.profile_path, opts.report));
    const SampleSeries series = series_from_table(read_csv(opts.input), opts.x_col, opts.y_col);
    write_text(opts.out, render_svg(series, profile, report.knots));
    log << "wrote " << opts.out.string() << "\n";
}

void cmd_fit(const FitOptions& opts, std::ostream& log) {
    std::vector<double> knots = opts.knots;
    if (opts.report) {
        for (const Knot& k : read_report(*opts.report).knots) {
            knots.push_back(k.zeta);
        }
    }
    std::sort(knots.begin(), knots.end());
    const SampleSeries series = series_from_table(read_csv(opts.input), opts.x_col, opts.y_col);
    const SplineModel model = fit_spline(series, knots, opts.degree);
    const double rms = rms_residual(model, series);
    const json j{
        {"schema_version", kSchemaVersion},
        {"degree", model.degree},
        {"interior_knots", model.interior_knots},
        {"knots", model.knots},
        {"coefficients", std::vector<double>(model.coefficients.begin(), model.coefficients.end())},
        {"rms_residual", rms},
    };
    write_text(opts.out, dump(j));
    if (opts.curve) {
        std::string s = "x,y,spline\n";
        for (std::size_t i = 0; i < series.size(); ++i) {
            s += format_double(series.x()[i]) + "," + format_double(series.y()[i]) + "," +
                 format_double(eval_spline(model, series.x()[i])) + "\n";
        }
        write_text(*opts.curve, s);
    }
    log << "spline with " << model.interior_knots.size() << " interior knot(s); rms residual "
        << format_double(rms) << "\n";
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Detect derivative discontinuities in sampled signals"};
    app.require_subcommand(1);

    DetectOptions detect_opts;
    auto* detect_cmd = app.add_subcommand("detect", "Scan a CSV series and report discontinuity knots");
    detect_cmd->add_option("input", detect_opts.input, "Input CSV")->required();
    detect_cmd->add_option("--x-col", detect_opts.x_col, "Abscissa column (name or index)")->capture_default_str();
    detect_cmd->add_option("--y-col", detect_opts.y_col, "Ordinate column (name or index)")->capture_default_str();
    add_detector_flags(detect_cmd, detect_opts.flags);
    detect_cmd->add_option("--out", detect_opts.out, "Report JSON")->capture_default_str();
    detect_cmd->add_option("--profile", detect_opts.profile, "Profile CSV (default: <out stem>_profile.csv)");
    detect_cmd->add_option("--plot", detect_opts.plot, "Also render an SVG");

    SynthOptions synth_opts;
    auto* synth_cmd = app.add_subcommand("synth", "Write the quadratic test signal with known knots");
    synth_cmd->add_option("--sigma", synth_opts.sigma, "Gaussian noise level")->capture_default_str();
    synth_cmd->add_option("--num-points", synth_opts.num_points, "Number of samples")->capture_default_str();
    synth_cmd->add_option("--seed", synth_opts.seed, "Noise seed")->capture_default_str();
    synth_cmd->add_option("--out", synth_opts.out, "Output CSV")->capture_default_str();

    MonteCarloOptions mc_opts;
    auto* mc_cmd = app.add_subcommand("montecarlo", "Score knot localisation over seeded noise draws");
    mc_cmd->add_option("--m", mc_opts.m, "Iterations")->capture_default_str();
    mc_cmd->add_option("--sigma", mc_opts.sigma, "Gaussian noise level")->capture_default_str();
    mc_cmd->add_option("--num-points", mc_opts.num_points, "Samples per iteration")->capture_default_str();
    mc_cmd->add_option("--seed", mc_opts.seed, "Base seed; iteration i uses seed + i")->capture_default_str();
    mc_cmd->add_option("--threads", mc_opts.threads, "Worker threads (0: all cores)")->capture_default_str();
    mc_cmd->add_option("--out", mc_opts.out, "Summary JSON")->capture_default_str();
    auto& mf = mc_opts.flags;
    mc_cmd->add_option("--order", mf.order, "Derivative order")->capture_default_str();
    mc_cmd->add_option("--degree-left", mf.degree_left)->capture_default_str();
    mc_cmd->add_option("--degree-right", mf.degree_right)->capture_default_str();
    mc_cmd->add_option("--support-left", mf.support_left)->capture_default_str();
    mc_cmd->add_option("--support-right", mf.support_right)->capture_default_str();
    mc_cmd->add_option("--confidence", mf.confidence)->capture_default_str();
    mc_cmd->add_option("--min-separation", mf.min_separation)->capture_default_str();
    mc_cmd->add_flag("--normalize-x", mf.normalize_x);

    PlotOptions plot_opts;
    auto* plot_cmd = app.add_subcommand("plot", "Render a stored report as SVG");
    plot_cmd->add_option("--report", plot_opts.report, "Report JSON written by detect")->required();
    plot_cmd->add_option("--input", plot_opts.input, "The CSV the report was computed from")->required();
    plot_cmd->add_option("--x-col", plot_opts.x_col)->capture_default_str();
    plot_cmd->add_option("--y-col", plot_opts.y_col)->capture_default_str();
    plot_cmd->add_option("--out", plot_opts.out, "Output SVG")->capture_default_str();

    FitOptions fit_opts;
    auto* fit_cmd = app.add_subcommand("fit", "Least-squares B-spline using detected knots");
    fit_cmd->add_option("input", fit_opts.input, "Input CSV")->required();
    fit_cmd->add_option("--x-col", fit_opts.x_col)->capture_default_str();
    fit_cmd->add_option("--y-col", fit_opts.y_col)->capture_default_str();
    fit_cmd->add_option("--report", fit_opts.report, "Take interior knots from a detect report");
    fit_cmd->add_option("--knots", fit_opts.knots, "Explicit interior knots")->delimiter(',');
    fit_cmd->add_option("--degree", fit_opts.degree, "Spline degree")->capture_default_str();
    fit_cmd->add_option("--out", fit_opts.out, "Spline JSON")->capture_default_str();
    fit_cmd->add_option("--curve", fit_opts.curve, "CSV of x, y and the fitted spline");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*detect_cmd) {
            cmd_detect(detect_opts, out);
        } else if (*synth_cmd) {
            cmd_synth(synth_opts, out);
        } else if (*mc_cmd) {
            cmd_montecarlo(mc_opts, out);
        } else if (*plot_cmd) {
            cmd_plot(plot_opts, out);
        } else if (*fit_cmd) {
            cmd_fit(fit_opts, out);
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

}  // namespace cndisc::cli
