#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "kvnlab/scenario.hpp"

namespace kvn {

namespace {

std::string fmt_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_svg(const RunReport& r, const std::string& path) {
    // convenience line chart of the series columns; CSV remains canonical
    const int w = 800, h = 420, ml = 60, mr = 20, mt = 20, mb = 40;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("emit_report: cannot write " + path);

    struct Col {
        const char* name;
        const char* color;
        double ReportRow::*field;
    };
    const Col cols[] = {
        {"exp_x1", "#1f77b4", &ReportRow::exp_x1},
        {"exp_p2", "#ff7f0e", &ReportRow::exp_p2},
        {"var_x1", "#2ca02c", &ReportRow::var_x1},
        {"negativity", "#d62728", &ReportRow::negativity},
        {"entropy", "#9467bd", &ReportRow::entropy},
        {"c_drift", "#8c564b", &ReportRow::c_drift},
    };

    double tmin = 0.0, tmax = 1.0, vmin = 0.0, vmax = 1.0;
    if (!r.rows.empty()) {
        tmin = tmax = r.rows.front().t;
        vmin = vmax = r.rows.front().exp_x1;
        for (const auto& row : r.rows) {
            tmin = std::min(tmin, row.t);
            tmax = std::max(tmax, row.t);
            for (const auto& c : cols) {
                vmin = std::min(vmin, row.*(c.field));
                vmax = std::max(vmax, row.*(c.field));
            }
        }
    }
    if (tmax <= tmin) tmax = tmin + 1.0;
    if (vmax <= vmin) vmax = vmin + 1.0;

    auto px = [&](double t) { return ml + (t - tmin) / (tmax - tmin) * (w - ml - mr); };
    auto py = [&](double v) { return h - mb - (v - vmin) / (vmax - vmin) * (h - mt - mb); };

    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='" << h - mb
       << "' stroke='black'/>\n";
    os << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << h - mb
       << "' stroke='black'/>\n";
    os << "<text x='" << (w / 2) << "' y='" << h - 8 << "' font-size='13'>t</text>\n";
    int li = 0;
    for (const auto& c : cols) {
        os << "<polyline fill='none' stroke='" << c.color << "' stroke-width='1.5' points='";
        for (const auto& row : r.rows) {
            os << px(row.t) << "," << py(row.*(c.field)) << " ";
        }
        os << "'/>\n";
        os << "<text x='" << w - mr - 110 << "' y='" << (mt + 16 * (li + 1)) << "' fill='"
           << c.color << "' font-size='12'>" << c.name << "</text>\n";
        ++li;
    }
    os << "</svg>\n";
}

}  // namespace

void emit_report(const RunReport& r, const std::string& dir, bool plot) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("emit_report: cannot create directory " + dir);

    {
        const std::string path = dir + "/series.csv";
        std::ofstream os(path);
        if (!os) throw std::runtime_error("emit_report: cannot write " + path);
        os << "t,exp_x1,exp_p2,var_x1,negativity,entropy,c_drift\n";
        for (const auto& row : r.rows) {
            os << fmt_full(row.t) << ',' << fmt_full(row.exp_x1) << ',' << fmt_full(row.exp_p2)
               << ',' << fmt_full(row.var_x1) << ',' << fmt_full(row.negativity) << ','
               << fmt_full(row.entropy) << ',' << fmt_full(row.c_drift) << '\n';
        }
    }

    {
        nlohmann::json j;
        j["scenario"] = r.scenario;
        j["version"] = version_string();
        j["tol_scale"] = r.tol_scale;
        j["provenance"] = r.provenance;
        j["notes"] = r.notes;
        j["series"] = "series.csv";
        auto& vj = j["verdicts"];
        vj = nlohmann::json::array();
        for (const auto& v : r.verdicts) {
            vj.push_back({{"name", v.name},
                          {"pass", v.pass},
                          {"measured", v.measured},
                          {"tolerance", v.tolerance},
                          {"detail", v.detail}});
        }
        j["all_pass"] = r.all_pass();
        std::ofstream os(dir + "/report.json");
        if (!os) throw std::runtime_error("emit_report: cannot write report.json");
        os << j.dump(2) << '\n';
    }

    if (plot) write_svg(r, dir + "/plot.svg");
}

}  // namespace kvn
