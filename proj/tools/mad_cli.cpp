#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <thread>

#include "mad/fd_solver.hpp"
#include "mad/harness/bench.hpp"
#include "mad/harness/dataset_io.hpp"
#include "mad/harness/metrics.hpp"
#include "mad/harness/test_sets.hpp"
#include "mad/neural/model_io.hpp"
#include "mad/neural/train.hpp"
#include "mad/sampler_grf.hpp"
#include "mad/sampler_mad.hpp"
#include "mad/simd.hpp"

using json = nlohmann::ordered_json;
using namespace mad;

namespace {

struct Global {
    std::uint64_t seed = 0;
    std::string out;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::string format = "table";
};

struct DomainArgs {
    std::string kind = "square";
    int grid = 51;
    int boundary_points = 0;  // 0 = domain default

    Domain build() const {
        const DomainKind k = parse_domain_kind(kind);
        return build_domain(k, {grid, boundary_points > 0 ? boundary_points : default_boundary_count(k)});
    }
};

struct EquationArgs {
    std::string family = "laplace";
    double k = 0.0;
    bool source = false;

    EquationSpec build() const {
        return parse_equation(family, k, source ? SourceMode::General : SourceMode::Zero);
    }
};

void add_domain(CLI::App* app, DomainArgs& d) {
    app->add_option("--domain", d.kind, "square|disk|lshape|cube3d")->capture_default_str();
    app->add_option("--grid", d.grid, "grid points per axis")->capture_default_str();
    app->add_option("--boundary-points", d.boundary_points, "boundary samples Mb (0 = domain default)");
}

void add_equation(CLI::App* app, EquationArgs& e) {
    app->add_option("--equation", e.family, "laplace|poisson|helmholtz")->capture_default_str();
    app->add_option("--k", e.k, "Helmholtz coefficient k")->capture_default_str();
    app->add_flag("--source", e.source, "Helmholtz with a general source term");
}

void print_table(const json& j, const std::string& prefix, std::ostream& os) {
    for (const auto& [key, value] : j.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            print_table(value, name, os);
        } else if (value.is_array() && value.size() > 8) {
            os << name << "  [" << value.size() << " values]\n";
        } else {
            os << name << "  " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
        }
    }
}

void emit(const Global& g, const json& report, bool report_to_out) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (report_to_out && !g.out.empty()) {
        file.open(g.out);
        if (!file) throw std::runtime_error("cannot write " + g.out);
        os = &file;
    }
    if (g.format == "json") {
        *os << report.dump(2) << "\n";
    } else {
        print_table(report, "", *os);
    }
}

json dataset_header(const Dataset& ds) {
    const auto& m = ds.meta;
    return {{"generator", std::string(to_string(m.generator))},
            {"provenance", std::string(to_string(m.provenance))},
            {"equation", equation_name(m.equation)},
            {"k", m.equation.k},
            {"source", std::string(to_string(m.equation.source))},
            {"domain", std::string(to_string(m.domain))},
            {"resolution", m.grid.resolution},
            {"boundary_points", ds.boundary_size},
            {"grid_nodes", ds.grid_size},
            {"samples", ds.n},
            {"has_f", ds.has_f},
            {"has_u", ds.has_u},
            {"master_seed", m.master_seed},
            {"generation_seconds", m.generation_seconds},
            {"n_centers", m.n_centers},
            {"n_terms", m.n_terms},
            {"length_scale", m.length_scale},
            {"sigma", m.sigma},
            {"h_oracle", m.h_oracle}};
}

json field_stats(const std::vector<double>& v) {
    if (v.empty()) return nullptr;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    double ss = 0.0;
    for (double x : v) ss += x * x;
    return {{"min", *lo}, {"max", *hi}, {"rms", std::sqrt(ss / static_cast<double>(v.size()))}};
}

std::string read_magic(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string magic(4, '\0');
    is.read(magic.data(), 4);
    return magic;
}

Dataset solve_records(const EquationSpec& eq, const Domain& d, const std::vector<double>& g,
                      const std::vector<double>& f, std::size_t n, double h, const Global& gl, double& seconds,
                      double& iterations) {
    const std::size_t mb = d.boundary_points().size();
    const std::size_t m = d.grid_nodes().size();
    const std::size_t res = static_cast<std::size_t>(d.grid().resolution);
    if (!f.empty() && m != res * res) {
        throw std::invalid_argument("source input is supported on full-lattice domains (square) only");
    }
    std::vector<FieldSample> samples(n);
    seconds = 0.0;
    iterations = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        FieldSample& s = samples[i];
        s.g.assign(g.begin() + i * mb, g.begin() + (i + 1) * mb);
        FieldFn ff = nullptr;
        if (!f.empty()) {
            s.f.assign(f.begin() + i * m, f.begin() + (i + 1) * m);
            ff = lattice_interpolant(d, s.f);
        }
        const auto r = solve_on_domain(eq, d, boundary_interpolant(d, s.g), ff, h);
        s.u = r.u;
        s.seed = gl.seed;
        seconds += r.seconds;
        iterations += r.iterations;
    }
    DatasetMeta meta;
    meta.generator = Generator::FdOracle;
    meta.provenance = Provenance::TestSet2;
    meta.equation = eq;
    meta.domain = d.kind();
    meta.grid = d.grid();
    meta.master_seed = gl.seed;
    meta.generation_seconds = seconds;
    meta.h_oracle = h;
    if (n > 0) iterations /= static_cast<double>(n);
    return assemble_dataset(meta, d, samples);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mad: exact synthetic PDE data, neural operator training and FD validation"};
    app.require_subcommand(1);
    Global gl;
    app.add_option("--seed", gl.seed, "master seed")->capture_default_str();
    app.add_option("--out", gl.out, "output file");
    app.add_option("--threads", gl.threads, "worker threads")->capture_default_str();
    app.add_option("--format", gl.format, "report format")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();

    // gen
    auto* gen = app.add_subcommand("gen", "generate a dataset");
    std::string method = "mad1";
    std::string set = "train";
    DomainArgs gen_domain;
    EquationArgs gen_eq;
    std::size_t samples = 100;
    GeneratorOptions gen_opts;
    GrfConfig grf;
    SmoothingConfig smoothing;
    double h_oracle = kDefaultOracleSpacing;
    gen->add_option("--method", method, "mad0|mad1|mad2|pinn-grf|fd-oracle")->capture_default_str();
    gen->add_option("--set", set, "train|test1 (MAD methods)")->check(CLI::IsMember({"train", "test1"}));
    add_domain(gen, gen_domain);
    add_equation(gen, gen_eq);
    gen->add_option("--samples", samples, "number of records")->capture_default_str();
    gen->add_option("--centers", gen_opts.n_centers, "MAD1 centers (0 = default)");
    gen->add_option("--terms", gen_opts.n_terms, "MAD2 terms")->capture_default_str();
    gen->add_option("--length-scale", grf.length_scale, "GRF length scale")->capture_default_str();
    gen->add_option("--sigma", smoothing.sigma, "source smoothing width in grid units")->capture_default_str();
    gen->add_option("--h-oracle", h_oracle, "FD oracle spacing (fd-oracle)")->capture_default_str();

    // train
    auto* tr = app.add_subcommand("train", "train a neural operator");
    std::string arch = "baseline", loss = "mad", data_path, branch_init = "zero";
    nn::TrainConfig tcfg;
    std::size_t log_every = 0;
    tr->add_option("--arch", arch, "baseline|wide|deep|dual")->capture_default_str();
    tr->add_option("--loss", loss, "mad|pinn")->capture_default_str();
    tr->add_option("--data", data_path, "training dataset")->required();
    tr->add_option("--epochs", tcfg.epochs, "epochs")->capture_default_str();
    tr->add_option("--lr", tcfg.lr, "Adam learning rate")->capture_default_str();
    tr->add_option("--batch-size", tcfg.batch_size, "mini-batch size (0 = full batch)")->capture_default_str();
    tr->add_option("--branch-init", branch_init, "zero|glorot")->capture_default_str();
    tr->add_option("--log-every", log_every, "print the loss every N epochs to stderr");

    // eval
    auto* ev = app.add_subcommand("eval", "relative L2 error of a model on a test set");
    std::string model_path, test_path;
    bool per_sample = false;
    ev->add_option("--model", model_path, "model file")->required();
    ev->add_option("--data", test_path, "test dataset")->required();
    ev->add_flag("--per-sample", per_sample, "include per-sample errors");

    // bench
    auto* be = app.add_subcommand("bench", "MAD1 generation time against FD solves");
    DomainArgs bench_domain;
    EquationArgs bench_eq{"helmholtz", 100.0, false};
    std::size_t bench_n = 200;
    double bench_h = kDefaultOracleSpacing;
    add_domain(be, bench_domain);
    add_equation(be, bench_eq);
    be->add_option("--samples", bench_n, "number of problems")->capture_default_str();
    be->add_option("--h-oracle", bench_h, "FD spacing")->capture_default_str();

    // solve-fd
    auto* sf = app.add_subcommand("solve-fd", "five-point FD reference solve");
    DomainArgs fd_domain;
    EquationArgs fd_eq;
    std::string fd_in;
    bool manufactured = false;
    double fd_h = kDefaultOracleSpacing;
    sf->set_help_flag("--help", "print this help message and exit");
    add_domain(sf, fd_domain);
    add_equation(sf, fd_eq);
    sf->add_option("--h", fd_h, "lattice spacing")->capture_default_str();
    sf->add_option("--in", fd_in, "bc.json ({\"g\": [...], optional \"f\", domain keys}) or .madset");
    sf->add_flag("--manufactured", manufactured, "solve for u = cos(6x) sin(8y) and report its error");

    // inspect
    auto* in = app.add_subcommand("inspect", "print the header of a dataset or model file");
    std::string inspect_path;
    in->add_option("file", inspect_path, ".madset or .madnn file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const Domain d = gen_domain.build();
            const EquationSpec eq = gen_eq.build();
            gen_opts.threads = gl.threads;
            if (set == "test1") gen_opts.provenance = Provenance::TestSet1;
            Dataset ds;
            const Generator g = parse_generator(method);
            if (g == Generator::PinnGrf) {
                ds = generate_grf_dataset(eq, d, samples, gl.seed, grf, smoothing);
            } else if (g == Generator::FdOracle) {
                TestSet2Options o;
                o.h_oracle = h_oracle;
                o.grf = grf;
                o.smoothing = smoothing;
                o.threads = gl.threads;
                ds = build_test_set_2(eq, d, samples, gl.seed, o);
            } else if (set == "test1") {
                ds = build_test_set_1(g, eq, d, samples, gl.seed, gen_opts);
            } else {
                ds = generate_dataset(g, eq, d, samples, gl.seed, gen_opts);
            }
            if (gl.out.empty()) throw std::invalid_argument("gen needs --out file.madset");
            save_dataset(ds, gl.out);
            json r = dataset_header(ds);
            r["file"] = gl.out;
            r["bytes"] = kDatasetHeaderBytes + dataset_payload_bytes(ds);
            emit(gl, r, false);
        } else if (*tr) {
            const Dataset ds = load_dataset(data_path);
            const Domain d = domain_of(ds);
            auto cfg = nn::default_config(nn::parse_arch(arch), static_cast<std::size_t>(d.dim()), ds.boundary_size,
                                          ds.has_f ? ds.grid_size : 0);
            cfg.branch_init = nn::parse_branch_init(branch_init);
            auto model = nn::make_model(cfg, gl.seed);
            tcfg.loss = nn::parse_loss(loss);
            tcfg.seed = gl.seed;
            if (log_every > 0) {
                tcfg.on_epoch = [&](std::size_t e, double l) {
                    if ((e + 1) % log_every == 0) std::fprintf(stderr, "epoch %zu loss %.6e\n", e + 1, l);
                };
            }
            const auto res = nn::train(model, ds, tcfg);
            if (gl.out.empty()) throw std::invalid_argument("train needs --out model.madnn");
            nn::save_model(model, gl.out);
            json r{{"arch", arch},
                   {"loss", loss},
                   {"branch_init", branch_init},
                   {"parameters", model.num_params()},
                   {"epochs", tcfg.epochs},
                   {"lr", tcfg.lr},
                   {"batch_size", tcfg.batch_size},
                   {"seed", gl.seed},
                   {"final_loss", res.history.empty() ? 0.0 : res.history.back()},
                   {"seconds", res.seconds},
                   {"simd", std::string(simd::backend_name(simd::active_backend()))},
                   {"file", gl.out}};
            emit(gl, r, false);
        } else if (*ev) {
            const auto model = nn::load_model(model_path);
            const auto ds = load_dataset(test_path);
            const auto rep = evaluate(model, ds, gl.threads);
            json r{{"model", model_path},
                   {"data", test_path},
                   {"generator", std::string(to_string(rep.generator))},
                   {"provenance", std::string(to_string(rep.provenance))},
                   {"samples", rep.per_sample.size()},
                   {"mean_relative_l2", rep.mean}};
            if (per_sample) r["per_sample"] = rep.per_sample;
            emit(gl, r, true);
        } else if (*be) {
            const auto rep = bench_generation(bench_eq.build(), bench_domain.build(), bench_n, gl.seed, bench_h,
                                              gl.threads);
            json r{{"samples", rep.n},
                   {"h_oracle", rep.h_oracle},
                   {"t_mad", rep.t_mad},
                   {"t_fd", rep.t_fd},
                   {"ratio", rep.ratio ? json(*rep.ratio) : json(nullptr)},
                   {"mean_fd_iterations", rep.mean_fd_iterations}};
            emit(gl, r, true);
        } else if (*sf) {
            json r;
            if (manufactured) {
                const EquationSpec eq = fd_eq.build();
                const double shift = eq.k - 100.0;
                const FieldFn u = [](const Point& q) { return std::cos(6 * q.x) * std::sin(8 * q.y); };
                const FieldFn f = [shift](const Point& q) { return shift * std::cos(6 * q.x) * std::sin(8 * q.y); };
                const EquationSpec with_source{eq.k, SourceMode::General};
                const auto p = make_fd_problem(with_source, parse_domain_kind(fd_domain.kind), fd_h, u, f);
                const auto s = solve_fd(p);
                double num = 0.0, den = 0.0;
                for (std::size_t i = 0; i < s.u.size(); ++i) {
                    const double t = u(p.grid.node(i));
                    num += (s.u[i] - t) * (s.u[i] - t);
                    den += t * t;
                }
                r = {{"solution", "cos(6x) sin(8y)"},
                     {"k", eq.k},
                     {"h", fd_h},
                     {"unknowns", p.grid.unknown_count()},
                     {"iterations", s.iterations},
                     {"relative_residual", s.relative_residual},
                     {"relative_l2_error", std::sqrt(num / den)},
                     {"seconds", s.seconds}};
            } else {
                if (fd_in.empty()) throw std::invalid_argument("solve-fd needs --in or --manufactured");
                Dataset out;
                double secs = 0.0, iters = 0.0;
                if (read_magic(fd_in) == "MADS") {
                    const auto src = load_dataset(fd_in);
                    out = solve_records(src.meta.equation, domain_of(src), src.g, src.f, src.n, fd_h, gl, secs, iters);
                } else {
                    std::ifstream is(fd_in);
                    const json bc = json::parse(is);
                    DomainArgs da = fd_domain;
                    EquationArgs ea = fd_eq;
                    da.kind = bc.value("domain", da.kind);
                    da.grid = bc.value("grid", da.grid);
                    da.boundary_points = bc.value("boundary_points", da.boundary_points);
                    ea.family = bc.value("equation", ea.family);
                    ea.k = bc.value("k", ea.k);
                    const auto g = bc.at("g").get<std::vector<double>>();
                    const auto f = bc.value("f", std::vector<double>{});
                    ea.source = ea.source || !f.empty();
                    const Domain d = da.build();
                    if (g.size() != d.boundary_points().size()) {
                        throw std::invalid_argument("bc.json: g has " + std::to_string(g.size()) + " values, domain has " +
                                                    std::to_string(d.boundary_points().size()) + " boundary points");
                    }
                    if (!f.empty() && f.size() != d.grid_nodes().size()) {
                        throw std::invalid_argument("bc.json: f must have one value per grid node");
                    }
                    out = solve_records(ea.build(), d, g, f, 1, fd_h, gl, secs, iters);
                }
                if (gl.out.empty()) throw std::invalid_argument("solve-fd needs --out sol.madset");
                save_dataset(out, gl.out);
                r = dataset_header(out);
                r["mean_iterations"] = iters;
                r["solve_seconds"] = secs;
                r["file"] = gl.out;
            }
            emit(gl, r, false);
        } else if (*in) {
            json r;
            const std::string magic = read_magic(inspect_path);
            if (magic == "MADS") {
                const auto ds = load_dataset(inspect_path);
                r = dataset_header(ds);
                r["format_version"] = kDatasetFormatVersion;
                r["g"] = field_stats(ds.g);
                r["f"] = field_stats(ds.f);
                r["u"] = field_stats(ds.u);
            } else if (magic == "MADN") {
                const auto m = nn::load_model(inspect_path);
                const auto& c = m.config();
                r = {{"format_version", nn::kModelFormatVersion},
                     {"arch", std::string(nn::to_string(c.arch))},
                     {"dim", c.dim},
                     {"boundary_inputs", c.boundary_inputs},
                     {"source_inputs", c.source_inputs},
                     {"latent", c.latent},
                     {"width", c.width},
                     {"depth", c.depth},
                     {"trunk_activation", std::string(nn::to_string(c.trunk_activation))},
                     {"branch_init", std::string(nn::to_string(c.branch_init))},
                     {"parameters", m.num_params()}};
            } else {
                throw std::invalid_argument(inspect_path + ": not a dataset or model file");
            }
            emit(gl, r, true);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "mad: %s\n", e.what());
        return 1;
    }
    return 0;
}
