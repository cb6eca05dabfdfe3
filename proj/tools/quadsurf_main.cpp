#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "quadsurf/claims.hpp"
#include "quadsurf/error.hpp"
#include "quadsurf/field_eval.hpp"
#include "quadsurf/fields.hpp"
#include "quadsurf/freeboundary.hpp"
#include "quadsurf/geometry.hpp"
#include "quadsurf/io.hpp"
#include "quadsurf/measures.hpp"
#include "quadsurf/oracle.hpp"
#include "quadsurf/poisson.hpp"
#include "quadsurf/thickness.hpp"

namespace fs = std::filesystem;
using namespace quadsurf;

namespace {

void check_thread_env() {
    const char* raw = std::getenv("QUADSURF_THREADS");
    if (!raw) return;
    char* end = nullptr;
    long v = std::strtol(raw, &end, 10);
    if (end == raw || *end != '\0' || v < 1)
        throw Error(Errc::validation, "QUADSURF_THREADS must be a positive integer");
    // Modules run serially; a cap of any size is honored.
}

void prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(Errc::io_failure, "cannot create output directory " + dir);
}

std::string body_json(const geometry::ConvexBody& body) {
    io::JsonWriter w;
    w.begin_object();
    if (body.kind == geometry::ConvexBody::Kind::disk) {
        w.key("kind").string("disk");
        w.key("center").begin_array().number(body.center.x).number(body.center.y).end_array();
        w.key("radius").number(body.radius);
    } else {
        w.key("kind").string("polygon");
        w.key("vertices").begin_array();
        for (Vec2 v : body.vertices)
            w.begin_array().number(v.x).number(v.y).end_array();
        w.end_array();
    }
    w.end_object();
    return w.str();
}

int run_oracle(double rho, double R, int grid_n, const std::string& out) {
    if (!(rho > 0.0) || !(rho < R))
        throw Error(Errc::validation, "need 0 < rho < R");
    if (grid_n < 16) throw Error(Errc::validation, "grid must be at least 16");
    prepare_out_dir(out);
    io::DirLock lock(out);

    oracle::RadialSolution sol = oracle::annulus_solution(2, rho, R);
    fields::Grid grid = fields::make_centered_grid(R + 0.125, 1.0 / grid_n);
    fields::ScalarField field = oracle::sample_to_grid(sol, grid);
    fields::DomainMask mask = fields::disk_mask(grid, {0.0, 0.0}, R);
    geometry::ConvexBody body = geometry::ConvexBody::disk({0.0, 0.0}, rho);

    io::save_field(out, "field", field);
    io::save_mask(out, "mask", mask);
    io::write_text_file(out + "/body.json", body_json(body));

    io::JsonWriter w;
    w.begin_object();
    w.key("kind").string("oracle");
    w.key("rho").number(rho);
    w.key("R").number(R);
    w.key("grid").number(grid_n);
    w.key("max_u").number(sol.max_u());
    w.key("files").begin_array();
    for (const char* f : {"field.bin", "field.json", "mask.bin", "mask.json", "body.json"})
        w.string(f);
    w.end_array();
    w.end_object();
    io::write_text_file(out + "/manifest.json", w.str());
    return 0;
}

int run_solve(const std::string& measure_path, int grid_n, std::vector<double> init_circle,
              double step, int max_iter, double stop_residual, double half_width,
              const std::string& out) {
    if (!fs::exists(measure_path))
        throw Error(Errc::validation, "measure file not found: " + measure_path);
    if (grid_n < 16) throw Error(Errc::validation, "grid must be at least 16");
    if (init_circle.size() != 3 || !(init_circle[2] > 0.0))
        throw Error(Errc::validation, "init circle expects cx,cy,r with r > 0");
    prepare_out_dir(out);
    io::DirLock lock(out);

    std::string measure_text = io::read_text_file(measure_path);
    measures::MeasureSpec spec = measures::measure_from_json(measure_text);
    measures::validate(spec);

    const double h = 1.0 / grid_n;
    Vec2 center{init_circle[0], init_circle[1]};
    double radius = init_circle[2];
    if (half_width <= 0.0)
        half_width = std::max(std::abs(center.x), std::abs(center.y)) + radius + 0.125;
    fields::Grid grid = fields::make_centered_grid(half_width, h);
    fields::DomainMask init = fields::disk_mask(grid, center, radius);

    freeboundary::SolveParams params;
    params.step = step;
    params.max_iter = max_iter;
    params.stop_residual = stop_residual;
    freeboundary::SolveResult run = freeboundary::solve_quadrature_surface(spec, init, params);

    io::save_mask(out, "mask", run.mask);
    io::save_field(out, "field", run.field);
    io::write_text_file(out + "/history.csv", freeboundary::history_csv(run.history));
    io::write_text_file(out + "/measure.json", measures::measure_to_json(spec));

    const char* status = "max-iterations";
    switch (run.status) {
        case freeboundary::SolveStatus::converged: status = "converged"; break;
        case freeboundary::SolveStatus::collapse: status = "collapse"; break;
        case freeboundary::SolveStatus::divergence: status = "divergence"; break;
        default: break;
    }
    io::JsonWriter w;
    w.begin_object();
    w.key("status").string(status);
    w.key("iterations").number(run.iterations);
    w.key("final_max_res").number(run.final_max_res);
    w.key("grid").number(grid_n);
    w.key("stop_residual").number(stop_residual);
    w.end_object();
    io::write_text_file(out + "/summary.json", w.str());

    return run.status == freeboundary::SolveStatus::converged ? 0 : 3;
}

claims::Instance instance_from_run_dir(const std::string& dir) {
    claims::Instance inst;
    inst.field = io::load_field(dir, "field");
    inst.mask = io::load_mask(dir, "mask");
    measures::MeasureSpec spec =
        measures::measure_from_json(io::read_text_file(dir + "/measure.json"));
    inst.body = measures::support_hull(spec);
    inst.resolution = static_cast<int>(std::lround(1.0 / inst.mask.grid.h));
    inst.max_u = fields::max_value(inst.field, inst.mask).value;
    inst.moll_radius = 2.0 * inst.mask.grid.h;
    return inst;
}

void write_verify_artifacts(const std::string& out, const std::string& label,
                            const std::vector<claims::ClaimReport>& reports,
                            const claims::Instance& finest) {
    io::write_text_file(out + "/report.json", claims::report_json(reports, label));

    thickness::GridField fe(finest.field, finest.max_u);
    thickness::GridMask me(finest.mask);
    const auto& g = finest.mask.grid;
    double rl = g.h * std::max(g.nx, g.ny);
    std::vector<double> levels = {0.1, 0.2, 0.5};
    thickness::ThicknessTable table =
        thickness::build_table(fe, me, finest.body, 360, levels, rl);
    io::write_text_file(out + "/thickness.csv", thickness::table_csv(table));

    std::vector<fields::LevelContour> contours;
    contours.push_back(fields::mask_contour(finest.mask));
    for (double t : levels) contours.push_back(fields::extract_contour(finest.field, t));
    std::vector<std::vector<Vec2>> overlays;
    for (std::size_t l = 1; l < table.levels.size(); ++l) {
        std::vector<Vec2> pts;
        for (std::size_t i = 0; i < table.samples.size(); ++i)
            if (table.flags[i][l] == 0)
                pts.push_back(table.samples[i].point +
                              table.d[i][l] * table.samples[i].normal);
        overlays.push_back(std::move(pts));
    }
    io::write_text_file(out + "/contours.svg", io::contour_svg(contours, overlays));
}

int run_verify(const std::string& scenario, const std::string& run_dir,
               std::vector<int> grids, const std::string& out) {
    if (scenario.empty() == run_dir.empty())
        throw Error(Errc::validation, "pass exactly one of --scenario and --run-dir");
    prepare_out_dir(out);
    io::DirLock lock(out);

    if (!scenario.empty()) {
        std::sort(grids.begin(), grids.end());
        std::vector<claims::Instance> instances;
        for (int n : grids) instances.push_back(claims::build_instance(scenario, n));
        std::vector<claims::ClaimReport> reports = claims::run_all_instances(instances);
        write_verify_artifacts(out, scenario, reports, instances.back());
    } else {
        claims::Instance inst = instance_from_run_dir(run_dir);
        std::vector<claims::Instance> instances;
        instances.push_back(std::move(inst));
        std::vector<claims::ClaimReport> reports = claims::run_all_instances(instances);
        write_verify_artifacts(out, "run-dir", reports, instances.back());
    }
    return 0;
}

int run_sweep(std::vector<double> rhos, std::vector<double> Rs, std::vector<int> grids,
              const std::string& out) {
    if (rhos.empty() || Rs.empty() || grids.empty())
        throw Error(Errc::validation, "sweep needs nonempty --rho, --R and --grids");
    prepare_out_dir(out);
    io::DirLock lock(out);

    struct Row {
        std::string claim_id;
        double rho, R;
        int grid;
        double res_max, res_mean;
        double level_res[3];
        bool level_present[3];
    };
    const double wanted[3] = {0.1, 0.2, 0.5};
    std::vector<Row> rows;
    for (double rho : rhos) {
        for (double R : Rs) {
            if (!(rho > 0.0) || !(rho < R))
                throw Error(Errc::validation, "need 0 < rho < R in the sweep");
            for (int n : grids) {
                std::vector<claims::Instance> one;
                one.push_back(claims::build_oracle_instance(rho, R, n));
                auto reports = claims::run_all_instances(one);
                for (const auto& r : reports) {
                    Row row{r.claim_id, rho, R, n, r.residual_max.back(),
                            r.residual_mean.back(), {0, 0, 0}, {false, false, false}};
                    for (std::size_t li = 0; li < r.levels.size(); ++li)
                        for (int k = 0; k < 3; ++k)
                            if (r.levels[li] == wanted[k]) {
                                row.level_res[k] = r.level_residuals[li];
                                row.level_present[k] = true;
                            }
                    rows.push_back(std::move(row));
                }
            }
        }
    }

    std::string csv =
        "claim_id,rho,R,grid,residual_max,residual_mean,"
        "res_level_0.1,res_level_0.2,res_level_0.5\n";
    // rows grouped per claim, then in (rho, R, grid) order
    for (std::size_t c = 0; c < 10; ++c) {
        for (const Row& row : rows) {
            if (row.claim_id != rows[c].claim_id) continue;
            csv += row.claim_id + "," + io::format_number(row.rho) + "," +
                   io::format_number(row.R) + "," + std::to_string(row.grid) + "," +
                   io::format_number(row.res_max) + "," + io::format_number(row.res_mean);
            for (int k = 0; k < 3; ++k)
                csv += "," + (row.level_present[k] ? io::format_number(row.level_res[k])
                                                   : std::string());
            csv += "\n";
        }
    }
    io::write_text_file(out + "/sweep.csv", csv);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for overdetermined quadrature-surface problems"};
    app.require_subcommand(1);

    double rho = 0.25, R = 1.0;
    int grid_n = 128;
    std::string out;

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "sample the closed-form annulus");
    oracle_cmd->add_option("--rho", rho, "source circle radius");
    oracle_cmd->add_option("--R", R, "domain radius");
    oracle_cmd->add_option("--grid", grid_n, "nodes per unit length");
    oracle_cmd->add_option("--out", out, "output directory")->required();

    std::string measure_path;
    std::vector<double> init_circle;
    double step = 0.4, stop_residual = 0.02, half_width = 0.0;
    int max_iter = 200;
    CLI::App* solve_cmd = app.add_subcommand("solve", "run the free-boundary iteration");
    solve_cmd->add_option("--measure", measure_path, "measure JSON file")->required();
    solve_cmd->add_option("--grid", grid_n, "nodes per unit length");
    solve_cmd->add_option("--init-circle", init_circle, "cx,cy,r")->delimiter(',')->expected(3);
    solve_cmd->add_option("--step", step, "relaxation factor");
    solve_cmd->add_option("--max-iter", max_iter, "iteration cap");
    solve_cmd->add_option("--stop-residual", stop_residual, "termination residual");
    solve_cmd->add_option("--half-width", half_width,
                          "grid half width (0: sized from the initial circle)");
    solve_cmd->add_option("--out", out, "output directory")->required();

    std::string scenario, run_dir;
    std::vector<int> grids = {64, 128};
    CLI::App* verify_cmd = app.add_subcommand("verify", "run the claim suite");
    verify_cmd->add_option("--scenario", scenario, "scenario name");
    verify_cmd->add_option("--run-dir", run_dir, "saved solve directory");
    verify_cmd->add_option("--grids", grids, "grid resolutions")->delimiter(',');
    verify_cmd->add_option("--out", out, "output directory")->required();

    std::vector<double> sweep_rhos, sweep_Rs;
    std::vector<int> sweep_grids;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "residuals over a parameter grid");
    sweep_cmd->add_option("--rho", sweep_rhos, "source radii")->delimiter(',');
    sweep_cmd->add_option("--R", sweep_Rs, "domain radii")->delimiter(',');
    sweep_cmd->add_option("--grids", sweep_grids, "grid resolutions")->delimiter(',');
    sweep_cmd->add_option("--out", out, "output directory")->required();

    try {
        app.parse(argc, argv);
        check_thread_env();
        if (oracle_cmd->parsed()) return run_oracle(rho, R, grid_n, out);
        if (solve_cmd->parsed()) {
            if (init_circle.empty()) init_circle = {0.0, 0.0, 1.3};
            return run_solve(measure_path, grid_n, init_circle, step, max_iter, stop_residual,
                             half_width, out);
        }
        if (verify_cmd->parsed()) return run_verify(scenario, run_dir, grids, out);
        if (sweep_cmd->parsed()) return run_sweep(sweep_rhos, sweep_Rs, sweep_grids, out);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
            case Errc::io_failure: return 4;
            case Errc::solver_failure: return 3;
            default: return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
