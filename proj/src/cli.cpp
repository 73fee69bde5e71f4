#include <functional>
#include <ostream>

#include "CLI11.hpp"

#include "crs/harness.hpp"

namespace crs {

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spherical CR geometry checks for the figure-eight knot complement", "crs"};
    app.fallthrough();
    app.require_subcommand(1);

    RunConfig cfg;
    std::string report_file;
    app.add_option("--precision-bits", cfg.precision_bits, "MPFR precision for decimal output")->capture_default_str();
    app.add_option("--tol", cfg.tol, "geometric tolerance")->capture_default_str();
    app.add_option("--n-edge", cfg.n_edge, "face samples along the edge direction")->capture_default_str();
    app.add_option("--n-fiber", cfg.n_fiber, "face samples along the fiber direction")->capture_default_str();
    app.add_option("--n-slices", cfg.n_slices, "slices for edge-link winding")->capture_default_str();
    app.add_option("--max-cosets", cfg.max_cosets, "coset enumeration bound")->capture_default_str();
    app.add_option("--out-dir", cfg.out_dir, std::string("output directory (overridden by ") + kOutDirEnv + ")")
        ->capture_default_str();
    app.add_option("--report", report_file, "also write the JSON report to this file");

    std::function<RunReport()> action;

    auto* verify = app.add_subcommand("verify", "matrix identity suites")->require_subcommand(1);
    int rho = 2, d = 7;
    auto* rep = verify->add_subcommand("rep", "relations, lattice membership and classification");
    rep->add_option("--rho", rho, "representation")->required()->check(CLI::IsMember({1, 2, 3}));
    rep->callback([&] { action = [&] { return verify_rep(rho, cfg); }; });
    auto* pic = verify->add_subcommand("picard", "Picard lattice identity suite");
    pic->add_option("--d", d, "lattice discriminant")->required()->check(CLI::IsMember({3, 7}));
    pic->callback([&] { action = [&] { return verify_picard(d, cfg); }; });

    auto* fp = app.add_subcommand("fp", "finitely presented groups")->require_subcommand(1);
    std::string preset_name;
    auto* ab = fp->add_subcommand("abelianize", "Smith normal form abelianization");
    ab->add_option("--preset", preset_name, "presentation")
        ->required()
        ->check(CLI::IsMember({"p3", "fig8", "triangle236-quotient", "triangle236", "picard7-stab"}));
    ab->callback([&] { action = [&] { return fp_abelianize(preset_name, cfg); }; });
    auto* cos = fp->add_subcommand("cosets", "coset enumeration");
    cos->add_option("--preset", preset_name, "subgroup preset")->required()->check(CLI::IsMember({"p3-N"}));
    cos->callback([&] { action = [&] { return fp_cosets(preset_name, cfg); }; });
    auto* sub = fp->add_subcommand("subgroup", "Reidemeister-Schreier and abelianization");
    sub->add_option("--preset", preset_name, "subgroup preset")->required()->check(CLI::IsMember({"p3-N"}));
    sub->callback([&] { action = [&] { return fp_subgroup(preset_name, cfg); }; });

    auto* cx = app.add_subcommand("complex", "the triangulation with holonomy rho2")->require_subcommand(1);
    cx->add_subcommand("build", "vertices, faces and pairings as JSON")->callback([&] {
        action = [&] { return complex_build(cfg); };
    });
    cx->add_subcommand("check-faces", "equivariance and sampled intersections")->callback([&] {
        action = [&] { return complex_check_faces(cfg); };
    });
    cx->add_subcommand("check-edges", "edge parametrizations, links, quotient and heights")->callback([&] {
        action = [&] { return complex_check_edges(cfg); };
    });
    cx->add_subcommand("report", "branching report")->callback([&] {
        action = [&] { return complex_report(cfg); };
    });

    auto* render = app.add_subcommand("render", "static figures")->require_subcommand(1);
    std::string which = "T1", faces_out, heights_out, heights_svg;
    auto* rf = render->add_subcommand("faces", "z-plane projection of the faces of a tetrahedron");
    rf->add_option("--which", which, "tetrahedron")->check(CLI::IsMember({"T1", "T2"}))->capture_default_str();
    rf->add_option("--out", faces_out, "SVG file")->required();
    rf->callback([&] {
        action = [&] {
            cfg.validate();
            Complex C = build_complex(cfg.tol);
            std::vector<const FaceDef*> faces;
            for (auto& F : C.tetra(which).faces) faces.push_back(&F);
            std::string path = cfg.resolve(faces_out);
            write_file(path, render_projection(faces, &C.V, cfg.sample()));
            RunReport R;
            R.command = "render faces --which " + which;
            R.config = cfg;
            R.info = {{"file", path}, {"faces", faces.size()}};
            return R;
        };
    });
    auto* rh = render->add_subcommand("heights", "height comparison table and plot");
    rh->add_option("--out", heights_out, "CSV file")->required();
    rh->add_option("--svg", heights_svg, "optional SVG line plot");
    rh->callback([&] {
        action = [&] {
            cfg.validate();
            HeightTable H = height_comparison(1000);
            std::string path = cfg.resolve(heights_out);
            write_file(path, render_heights_csv(H));
            RunReport R;
            R.command = "render heights";
            R.config = cfg;
            R.info = {{"file", path}, {"rows", H.rows.size()}, {"min_gap", H.min_gap}};
            if (!heights_svg.empty()) {
                std::string sp = cfg.resolve(heights_svg);
                write_file(sp, render_heights_svg(H));
                R.info["svg"] = sp;
            }
            R.checks.push_back(CheckReport::make(
                "t2 above t1 on the interior", H.pass(cfg.tol) ? Status::Pass : Status::Fail,
                std::max(0.0, -H.min_gap),
                {{"min_gap", H.min_gap}, {"interior_violations", H.interior_violations}, {"gaps", H.gaps}},
                "the chain from q2 to v7 stays above the face"));
            return R;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }
    if (!action) {
        err << app.help();
        return 2;
    }
    RunReport R;
    try {
        R = action();
    } catch (const HarnessError& e) {
        // bad configuration or preset names
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    std::string text = R.to_json().dump(2) + "\n";
    out << text;
    if (!report_file.empty()) {
        try {
            write_file(cfg.resolve(report_file), text);
        } catch (const IoError& e) {
            err << "error: " << e.what() << "\n";
            return 1;
        }
    }
    return R.pass() ? 0 : 1;
}

}  // namespace crs
