#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "geospan/connectivity_engine.hpp"
#include "geospan/focused.hpp"
#include "geospan/oracle.hpp"
#include "geospan/spanner_engine.hpp"
#include "geospan/workload.hpp"

using namespace geospan;

namespace {

ShapeKind parse_kind(const std::string& kind) {
    if (kind == "disk") return ShapeKind::Disk;
    if (kind == "cube") return ShapeKind::Cube;
    throw CLI::ValidationError("--kind must be disk or cube");
}

struct CsvRow {
    std::size_t op = 0;
    char type = 'I';
    ShapeId id = 0;
    std::size_t n = 0;
    std::size_t added = 0;
    std::size_t removed = 0;
    std::size_t edges = 0;
    std::size_t type1 = 0;
    std::size_t type2 = 0;
    std::size_t matching = 0;
    std::size_t z = 0;
    std::uint64_t node_versions = 0;
    long long wall_us = 0;
    int verify = -1;  // -1: not run
};

const char* kCsvHeader =
    "op,type,id,n,added,removed,edges,type1,type2,matching,z,node_versions,wall_us,verify";

void write_row(std::ostream& out, const CsvRow& row) {
    out << row.op << ',' << row.type << ',' << row.id << ',' << row.n << ',' << row.added << ','
        << row.removed << ',' << row.edges << ',' << row.type1 << ',' << row.type2 << ','
        << row.matching << ',' << row.z << ',' << row.node_versions << ',' << row.wall_us << ',';
    if (row.verify >= 0) out << row.verify;
    out << '\n';
}

Workload load_workload(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("cannot open workload: " + path);
    return parse_workload(in);
}

int run_spanner(const Workload& w, ShapeKind kind, SpaceMode mode, double eps, int verify_every,
                std::ostream& csv, std::ostream* edge_log) {
    SpannerConfig cfg;
    cfg.eps_user = eps;
    cfg.psi = w.psi;
    cfg.dim = w.dim;
    cfg.kind = kind;
    cfg.mode = mode;
    SpannerEngine engine(cfg);
    if (edge_log) engine.set_event_log(edge_log);

    csv << kCsvHeader << '\n';
    int violations = 0;
    std::size_t count = 0;
    for (const WorkloadOp& op : w.ops) {
        CsvRow row;
        row.op = count++;
        row.type = op.insert ? 'I' : 'D';
        row.id = op.id;
        const auto start = std::chrono::steady_clock::now();
        const auto events = op.insert ? engine.insert(op.shape) : engine.delete_shape(op.id);
        const auto stop = std::chrono::steady_clock::now();
        for (const EdgeEvent& e : events) (e.added ? row.added : row.removed) += 1;
        const EngineStats st = engine.stats();
        row.n = st.n;
        row.edges = st.edge_count;
        row.type1 = st.type1_count;
        row.type2 = st.type2_count;
        row.matching = st.matching_total;
        row.z = st.z;
        row.node_versions = st.node_versions;
        row.wall_us =
            std::chrono::duration_cast<std::chrono::microseconds>(stop - start).count();
        if (verify_every > 0 && row.op % std::size_t(verify_every) == 0) {
            const auto report =
                oracle::check_stretch(engine.edges(), engine.tree().shapes(), eps);
            row.verify = report.ok ? 1 : 0;
            if (!report.ok) ++violations;
        }
        write_row(csv, row);
    }
    std::cerr << "verify_violations=" << violations << '\n';
    return violations == 0 ? 0 : 3;
}

int run_connectivity(const Workload& w, ShapeKind kind, int verify_every, std::ostream& csv) {
    ConnectivityConfig cfg;
    cfg.psi = w.psi;
    cfg.dim = w.dim;
    cfg.kind = kind;
    ConnectivityEngine engine(cfg);

    csv << kCsvHeader << '\n';
    int violations = 0;
    std::size_t count = 0;
    SplitMix rng(w.seed ^ 0xabcdefull);
    std::vector<ShapeId> live;
    for (const WorkloadOp& op : w.ops) {
        CsvRow row;
        row.op = count++;
        row.type = op.insert ? 'I' : 'D';
        row.id = op.id;
        const auto start = std::chrono::steady_clock::now();
        if (op.insert) {
            engine.insert(op.shape);
            live.push_back(op.id);
        } else {
            engine.delete_shape(op.id);
            live.erase(std::find(live.begin(), live.end(), op.id));
        }
        const auto stop = std::chrono::steady_clock::now();
        row.n = engine.size();
        row.matching = engine.matching_total();
        row.z = engine.z_total();
        row.wall_us =
            std::chrono::duration_cast<std::chrono::microseconds>(stop - start).count();
        if (verify_every > 0 && row.op % std::size_t(verify_every) == 0 && live.size() >= 2) {
            const auto labels = oracle::components(oracle::full_graph(engine.tree().shapes()));
            bool ok = true;
            for (int t = 0; t < 8; ++t) {
                const ShapeId a = live[rng.below(live.size())];
                const ShapeId b = live[rng.below(live.size())];
                if (engine.connected(a, b) != (labels.at(a) == labels.at(b))) ok = false;
            }
            row.verify = ok ? 1 : 0;
            if (!ok) ++violations;
        }
        write_row(csv, row);
    }
    std::cerr << "verify_violations=" << violations << '\n';
    return violations == 0 ? 0 : 3;
}

int run_focused(const Workload& w, ShapeKind kind, SpaceMode mode, double eps, int verify_every,
                std::ostream& csv) {
    FocusedConfig cfg;
    cfg.eps_user = eps;
    cfg.psi = w.psi;
    cfg.dim = w.dim;
    cfg.kind = kind;
    cfg.mode = mode;
    FocusedDecomposition fd(cfg);

    csv << kCsvHeader << '\n';
    int violations = 0;
    std::size_t count = 0;
    for (const WorkloadOp& op : w.ops) {
        CsvRow row;
        row.op = count++;
        row.type = op.insert ? 'I' : 'D';
        row.id = op.id;
        const auto start = std::chrono::steady_clock::now();
        if (op.insert) {
            fd.insert(op.shape);
        } else {
            fd.delete_shape(op.id);
        }
        const auto stop = std::chrono::steady_clock::now();
        const FocusedStats st = fd.stats();
        row.n = st.shapes;
        row.edges = fd.spanner_edges().size();
        row.wall_us =
            std::chrono::duration_cast<std::chrono::microseconds>(stop - start).count();
        if (verify_every > 0 && row.op % std::size_t(verify_every) == 0) {
            const auto report = oracle::check_stretch(fd.spanner_edges(), fd.shapes(), eps);
            row.verify = report.ok ? 1 : 0;
            if (!report.ok) ++violations;
        }
        write_row(csv, row);
    }
    std::cerr << "verify_violations=" << violations << '\n';
    return violations == 0 ? 0 : 3;
}

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

void write_svg(const std::string& path, const std::string& title,
               const std::vector<Series>& series) {
    double max_x = 1, max_y = 1;
    for (const Series& s : series) {
        for (const auto& [x, y] : s.points) {
            max_x = std::max(max_x, x);
            max_y = std::max(max_y, y);
        }
    }
    const double w = 640, h = 400, margin = 48;
    std::ofstream out(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << w / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
        << "</text>\n";
    out << "<line x1='" << margin << "' y1='" << h - margin << "' x2='" << w - 8 << "' y2='"
        << h - margin << "' stroke='black'/>\n";
    out << "<line x1='" << margin << "' y1='" << h - margin << "' x2='" << margin
        << "' y2='24' stroke='black'/>\n";
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    int ci = 0;
    for (const Series& s : series) {
        std::ostringstream pts;
        for (const auto& [x, y] : s.points) {
            const double px = margin + (w - margin - 16) * (x / max_x);
            const double py = (h - margin) - (h - margin - 32) * (y / max_y);
            pts << px << ',' << py << ' ';
        }
        out << "<polyline fill='none' stroke='" << colors[ci % 6]
            << "' stroke-width='1.2' points='" << pts.str() << "'/>\n";
        out << "<text x='" << w - 220 << "' y='" << 40 + 16 * ci << "' font-size='11' fill='"
            << colors[ci % 6] << "'>" << s.name << "</text>\n";
        ++ci;
    }
    out << "<text x='" << w / 2 << "' y='" << h - 12 << "' text-anchor='middle' font-size='11'>"
        << "x max " << max_x << ", y max " << max_y << "</text>\n";
    out << "</svg>\n";
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("cannot open csv: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

int do_plot(const std::vector<std::string>& csvs, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<Series> edges_vs_n, cost, z_vs_matching;
    for (const std::string& path : csvs) {
        const auto rows = read_csv(path);
        Series e{path, {}}, c{path, {}}, z{path, {}};
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (r.size() < 13) continue;
            e.points.push_back({std::stod(r[3]), std::stod(r[6])});
            c.points.push_back({std::stod(r[0]), std::stod(r[12])});
            z.points.push_back({2.0 * std::stod(r[9]), std::stod(r[10])});
        }
        edges_vs_n.push_back(e);
        cost.push_back(c);
        z_vs_matching.push_back(z);
    }
    write_svg(out_dir + "/edges_vs_n.svg", "spanner edges vs n", edges_vs_n);
    write_svg(out_dir + "/update_cost.svg", "update wall time (us) vs op", cost);
    write_svg(out_dir + "/z_vs_matching.svg", "z vs 2*sum|M|", z_vs_matching);
    std::cerr << "wrote 3 plots to " << out_dir << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic intersection-graph spanner and connectivity bench harness"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "produce a workload file");
    GenerateParams gp;
    std::string gen_kind = "disk";
    std::string gen_out;
    gen->add_option("--seed", gp.seed, "rng seed");
    gen->add_option("--n", gp.n, "number of inserts");
    gen->add_option("--psi", gp.psi, "diameter upper bound");
    gen->add_option("--dim", gp.dim, "dimension (2-4)");
    gen->add_option("--kind", gen_kind, "disk|cube");
    gen->add_option("--churn", gp.churn, "delete ratio in [0,1)");
    gen->add_option("--span", gp.span, "region side (0 = bounding box)");
    gen->add_option("--origin", gp.origin, "region corner coordinate");
    gen->add_option("--out", gen_out, "output file (default stdout)");

    auto* run = app.add_subcommand("run", "replay a workload through an engine");
    std::string run_workload, run_engine = "spanner", run_mode = "small", run_out, run_log;
    std::string run_kind = "disk";
    double run_eps = 0.5;
    int verify_every = 0;
    run->add_option("--workload", run_workload, "workload file")->required();
    run->add_option("--engine", run_engine, "spanner|connectivity|focused");
    run->add_option("--mode", run_mode, "big|small");
    run->add_option("--eps", run_eps, "stretch parameter in (0,1)");
    run->add_option("--kind", run_kind, "disk|cube");
    run->add_option("--verify-every", verify_every, "oracle check period (0 = off)");
    run->add_option("--out", run_out, "csv output (default stdout)");
    run->add_option("--log", run_log, "edge event log file (spanner engine)");

    auto* plot = app.add_subcommand("plot", "render csv metrics as svg");
    std::vector<std::string> plot_csvs;
    std::string plot_dir = ".";
    plot->add_option("--csv", plot_csvs, "metrics csv (repeatable)")->required();
    plot->add_option("--out-dir", plot_dir, "output directory");

    auto* conn = app.add_subcommand("connected", "replay a workload, answer one query");
    std::string conn_workload, conn_kind = "disk";
    ShapeId conn_a = 0, conn_b = 0;
    conn->add_option("--workload", conn_workload, "workload file")->required();
    conn->add_option("--kind", conn_kind, "disk|cube");
    conn->add_option("--a", conn_a, "first shape id")->required();
    conn->add_option("--b", conn_b, "second shape id")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            gp.kind = parse_kind(gen_kind);
            const std::string text = serialize_workload(generate_workload(gp));
            if (gen_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream f(gen_out);
                f << text;
            }
            return 0;
        }
        if (run->parsed()) {
            const Workload w = load_workload(run_workload);
            const ShapeKind kind = parse_kind(run_kind);
            const SpaceMode mode = run_mode == "big" ? SpaceMode::Big : SpaceMode::Small;
            std::ofstream csv_file;
            std::ostream* csv = &std::cout;
            if (!run_out.empty()) {
                csv_file.open(run_out);
                csv = &csv_file;
            }
            std::ofstream log_file;
            std::ostream* log = nullptr;
            if (!run_log.empty()) {
                log_file.open(run_log);
                log = &log_file;
            }
            if (run_engine == "spanner") {
                return run_spanner(w, kind, mode, run_eps, verify_every, *csv, log);
            }
            if (run_engine == "connectivity") {
                return run_connectivity(w, kind, verify_every, *csv);
            }
            if (run_engine == "focused") {
                return run_focused(w, kind, mode, run_eps, verify_every, *csv);
            }
            throw CLI::ValidationError("--engine must be spanner|connectivity|focused");
        }
        if (plot->parsed()) {
            return do_plot(plot_csvs, plot_dir);
        }
        if (conn->parsed()) {
            const Workload w = load_workload(conn_workload);
            ConnectivityConfig cfg;
            cfg.psi = w.psi;
            cfg.dim = w.dim;
            cfg.kind = parse_kind(conn_kind);
            ConnectivityEngine engine(cfg);
            for (const WorkloadOp& op : w.ops) {
                if (op.insert) {
                    engine.insert(op.shape);
                } else {
                    engine.delete_shape(op.id);
                }
            }
            std::cout << (engine.connected(conn_a, conn_b) ? "true" : "false") << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
