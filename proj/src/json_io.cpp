#include "rdtoda/json_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rdtoda {

namespace {

ExpMonomialSum monomials_from_json(const Json& arr) {
    ExpMonomialSum out;
    for (const auto& t : arr) {
        if (!t.is_array() || t.size() != 4)
            throw std::invalid_argument("term entries must be [num, den, re, im] quadruples");
        out.add_term(Rational(t[0].get<std::int64_t>(), t[1].get<std::int64_t>()),
                     Complex(t[2].get<double>(), t[3].get<double>()));
    }
    return out;
}

Json monomials_to_json(const ExpMonomialSum& s) {
    Json arr = Json::array();
    for (const auto& t : s.terms)
        arr.push_back({t.exponent.num, t.exponent.den, t.coeff.real(), t.coeff.imag()});
    return arr;
}

std::string angle_to_string(const Angle& a) {
    if (a.exact()) return a.pi_coeff.str() + "*pi";
    return format_double(a.value());
}

} // namespace

RDifferential rdiff_from_json(const Json& j) {
    if (j.contains("preset")) {
        const std::string p = j.at("preset").get<std::string>();
        if (p != "airy") throw std::invalid_argument("unknown preset: " + p);
        return airy_preset();
    }
    RDifferential q;
    q.rank = j.at("rank").get<int>();
    const std::string punct = j.at("puncture").get<std::string>();
    if (punct == "zero")
        q.puncture = Puncture::ZERO;
    else if (punct == "infinity")
        q.puncture = Puncture::INFINITY_;
    else
        throw std::invalid_argument("puncture must be \"zero\" or \"infinity\"");
    const std::string frame = j.at("frame").get<std::string>();
    if (frame == "dz")
        q.frame = Frame::DZ;
    else if (frame == "dz_over_z")
        q.frame = Frame::DZ_OVER_Z;
    else
        throw std::invalid_argument("frame must be \"dz\" or \"dz_over_z\"");
    for (const auto& term : j.at("terms")) {
        RDifferential::QTerm t;
        t.poly = monomials_from_json(term.at("poly"));
        if (term.contains("exp_arg")) t.exp_arg = monomials_from_json(term.at("exp_arg"));
        q.terms.push_back(std::move(t));
    }
    q.validate();
    return q;
}

Json rdiff_to_json(const RDifferential& q) {
    if (q.airy_preset) return Json{{"preset", "airy"}};
    Json j;
    j["rank"] = q.rank;
    j["puncture"] = q.puncture == Puncture::ZERO ? "zero" : "infinity";
    j["frame"] = q.frame == Frame::DZ ? "dz" : "dz_over_z";
    j["terms"] = Json::array();
    for (const auto& t : q.terms) {
        Json term;
        term["poly"] = monomials_to_json(t.poly);
        if (!t.exp_arg.empty()) term["exp_arg"] = monomials_to_json(t.exp_arg);
        j["terms"].push_back(term);
    }
    return j;
}

Json moduli_to_json(const ModuliDescriptor& d) {
    Json j;
    j["unique"] = d.unique();
    j["factors"] = Json::array();
    for (const auto& f : d.factors) {
        Json fj;
        switch (f.kind) {
            case ModuliDescriptor::Kind::UNIQUE: fj["kind"] = "unique"; break;
            case ModuliDescriptor::Kind::P_FACTOR: fj["kind"] = "p"; break;
            case ModuliDescriptor::Kind::P_QP_FACTOR:
                fj["kind"] = "p_qp";
                fj["m"] = f.m;
                break;
        }
        if (f.interval) {
            Json ij;
            ij["theta1"] = angle_to_string(f.interval->theta1);
            ij["theta2"] = angle_to_string(f.interval->theta2());
            ij["theta1_value"] = f.interval->theta1.value();
            ij["theta2_value"] = f.interval->theta2().value();
            ij["rho"] = f.interval->rho.str();
            ij["alpha"] = {f.interval->alpha.real(), f.interval->alpha.imag()};
            ij["chart"] = f.interval->chart == Puncture::ZERO ? "zero" : "infinity";
            fj["interval"] = ij;
        }
        j["factors"].push_back(fj);
    }
    return j;
}

ChartGrid grid_from_json(const Json& j) {
    ChartGrid g;
    const std::string chart = j.at("chart").get<std::string>();
    if (chart == "log_polar")
        g.chart = Chart::LOG_POLAR;
    else if (chart == "cartesian")
        g.chart = Chart::CARTESIAN;
    else
        throw std::invalid_argument("chart must be \"log_polar\" or \"cartesian\"");
    const auto& ranges = j.at("ranges");
    g.x0 = ranges.at(0).get<double>();
    g.x1 = ranges.at(1).get<double>();
    if (ranges.size() >= 4) {
        g.y0 = ranges.at(2).get<double>();
        g.y1 = ranges.at(3).get<double>();
    }
    g.nx = j.at("nodes").at(0).get<int>();
    g.ny = j.at("nodes").at(1).get<int>();
    g.validate();
    return g;
}

ExpSum expsum_from_json(const Json& j) {
    ExpSum F;
    for (const auto& t : j.at("terms")) {
        if (!t.is_array() || t.size() != 3)
            throw std::invalid_argument("exp-sum terms must be [c, re, im] triples");
        F.c.push_back(t[0].get<double>());
        F.a.emplace_back(t[1].get<double>(), t[2].get<double>());
    }
    F.validate();
    return F;
}

WeightSpec weights_from_json(const Json& j) {
    WeightSpec w;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "b")
        w.pole = true;
    else if (kind == "a")
        w.pole = false;
    else
        throw std::invalid_argument("weight kind must be \"a\" or \"b\"");
    w.values = j.at("values").get<std::vector<double>>();
    w.r = static_cast<int>(w.values.size());
    w.m = j.value("m", 1);
    return w;
}

Json weight_fit_to_json(const WeightFit& fit) {
    Json j;
    j["kind"] = fit.pole ? "b" : "a";
    j["r"] = fit.r;
    j["m"] = fit.m;
    j["raw"] = fit.raw;
    j["values"] = fit.projected;
    j["khat_real"] = fit.khat_real;
    j["k"] = fit.k.k;
    j["max_fit_residual"] = fit.max_fit_residual;
    j["condition"] = fit.condition;
    return j;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_state_csv(const TodaState& state, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "# chart=" << (state.grid.chart == Chart::LOG_POLAR ? "log_polar" : "cartesian")
        << " r=" << state.r << " x0=" << format_double(state.grid.x0)
        << " x1=" << format_double(state.grid.x1) << " y0=" << format_double(state.grid.y0)
        << " y1=" << format_double(state.grid.y1) << " nx=" << state.grid.nx
        << " ny=" << state.grid.ny << "\n";
    out << "s,theta";
    for (int t = 1; t <= state.r; ++t) out << ",w_" << t;
    out << ",qnorm\n";
    for (int i = 0; i < state.grid.nx; ++i)
        for (int j = 0; j < state.grid.ny; ++j) {
            const int n = state.grid.idx(i, j);
            out << format_double(state.grid.xc(i)) << "," << format_double(state.grid.yc(j));
            for (int t = 0; t < state.r; ++t) out << "," << format_double(state.w[t][n]);
            out << "," << format_double(state.qnorm[n]) << "\n";
        }
    if (!out) throw std::runtime_error("write failed: " + path);
}

TodaState read_state_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string header;
    std::getline(in, header);
    if (header.rfind("# chart=", 0) != 0)
        throw std::runtime_error("missing \"# chart=\" header line: " + path);

    TodaState state;
    std::istringstream hs(header.substr(2));
    std::string kv;
    while (hs >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if (key == "chart")
            state.grid.chart = val == "cartesian" ? Chart::CARTESIAN : Chart::LOG_POLAR;
        else if (key == "r")
            state.r = std::stoi(val);
        else if (key == "x0")
            state.grid.x0 = std::stod(val);
        else if (key == "x1")
            state.grid.x1 = std::stod(val);
        else if (key == "y0")
            state.grid.y0 = std::stod(val);
        else if (key == "y1")
            state.grid.y1 = std::stod(val);
        else if (key == "nx")
            state.grid.nx = std::stoi(val);
        else if (key == "ny")
            state.grid.ny = std::stoi(val);
    }
    state.grid.validate();
    std::string line;
    std::getline(in, line); // column names
    state.w.assign(state.r, Field(state.grid.nnodes(), 0.0));
    state.qnorm.assign(state.grid.nnodes(), 0.0);
    state.qflag.assign(state.grid.nnodes(), 0);
    int row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= state.grid.nnodes())
            throw std::runtime_error("too many data rows: " + path);
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
        if (static_cast<int>(vals.size()) != state.r + 3)
            throw std::runtime_error("bad column count in row of " + path);
        for (int t = 0; t < state.r; ++t) state.w[t][row] = vals[2 + t];
        state.qnorm[row] = vals[2 + state.r];
        ++row;
    }
    if (row != state.grid.nnodes())
        throw std::runtime_error("row count does not match grid of " + path);
    return state;
}

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for hashing: " + path);
    std::uint64_t h = 14695981039346656037ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return Json::parse(in);
}

void write_json_file(const Json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

} // namespace rdtoda
