#include "deblur1d/io.hpp"

#include <fstream>

namespace deblur {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    return json::parse(in);
}

const char* kind_name(InnerKind k) {
    switch (k) {
        case InnerKind::L2: return "L2";
        case InnerKind::Hnu: return "Hnu";
        case InnerKind::Dq: return "Dq";
    }
    return "?";
}

void write_header_and_doubles(const std::filesystem::path& path, const json& header,
                              const double* data, size_t count) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    std::string h = header.dump();
    std::uint64_t len = h.size();
    out.write(reinterpret_cast<const char*>(&len), sizeof(len));
    out.write(h.data(), static_cast<std::streamsize>(h.size()));
    out.write(reinterpret_cast<const char*>(data),
              static_cast<std::streamsize>(count * sizeof(double)));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

json signal_to_json(const PLFunction& f) {
    return {{"n", f.mesh.level},
            {"nodal", std::vector<double>(f.nodal.data(), f.nodal.data() + f.nodal.size())}};
}

PLFunction signal_from_json(const json& j) {
    Mesh mesh(j.at("n").get<int>());
    auto vals = j.at("nodal").get<std::vector<double>>();
    if (static_cast<int>(vals.size()) != mesh.cells)
        throw std::runtime_error("signal file: nodal length != 2^n");
    return {mesh, Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size())};
}

void save_signal(const std::filesystem::path& path, const PLFunction& f) {
    write_text(path, signal_to_json(f).dump(2) + "\n");
}

PLFunction load_signal(const std::filesystem::path& path) {
    return signal_from_json(read_json(path));
}

void save_signal_csv(const std::filesystem::path& path, const PLFunction& f) {
    std::ostringstream os;
    os.precision(17);
    os << "x,value\n";
    for (int j = 0; j < f.mesh.cells; ++j) os << f.mesh.node(j) << "," << f.nodal[j] << "\n";
    write_text(path, os.str());
}

json measurement_to_json(const Measurement& m) {
    return {{"k", m.k},
            {"coeffs", std::vector<double>(m.coeffs.data(), m.coeffs.data() + m.coeffs.size())},
            {"sigma", m.sigma},
            {"meta", {{"seed", m.seed}, {"kernel", m.kernel_spec}, {"truth", m.truth_ref}}}};
}

Measurement measurement_from_json(const json& j) {
    Measurement m;
    m.k = j.at("k").get<int>();
    auto vals = j.at("coeffs").get<std::vector<double>>();
    if (static_cast<int>(vals.size()) != (1 << m.k))
        throw std::runtime_error("measurement file: coeffs length != 2^k");
    m.coeffs = Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size());
    m.sigma = j.at("sigma").get<double>();
    if (j.contains("meta")) {
        const json& meta = j["meta"];
        m.seed = meta.value("seed", 0ULL);
        m.kernel_spec = meta.value("kernel", "");
        m.truth_ref = meta.value("truth", "");
    }
    return m;
}

void save_measurement(const std::filesystem::path& path, const Measurement& m) {
    write_text(path, measurement_to_json(m).dump(2) + "\n");
}

Measurement load_measurement(const std::filesystem::path& path) {
    return measurement_from_json(read_json(path));
}

json report_to_json(const RunReport& r, int N, double epsilon) {
    return {{"N", N},
            {"epsilon", epsilon},
            {"samples", r.samples_used},
            {"acceptance", r.acceptance},
            {"time_s", r.wall_time_s},
            {"seed", r.seed}};
}

void save_basis_cache(const std::filesystem::path& path, const HierarchicalBasis& basis) {
    json header = {{"n", basis.mesh.level},
                   {"kind", kind_name(basis.kind)},
                   {"epsilon", basis.params.epsilon},
                   {"q", basis.params.q},
                   {"rows", basis.columns.rows()},
                   {"cols", basis.columns.cols()},
                   {"layout", "column-major-f64-le"}};
    write_header_and_doubles(path, header, basis.columns.data(),
                             static_cast<size_t>(basis.columns.size()));
}

std::optional<HierarchicalBasis> load_basis_cache(const std::filesystem::path& path, int n,
                                                  InnerKind kind, const PriorParams& p) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::uint64_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof(len));
    if (!in || len > (1u << 20)) return std::nullopt;
    std::string h(len, '\0');
    in.read(h.data(), static_cast<std::streamsize>(len));
    if (!in) return std::nullopt;
    json header = json::parse(h, nullptr, false);
    if (header.is_discarded()) return std::nullopt;
    if (header.value("n", -1) != n || header.value("kind", "") != kind_name(kind) ||
        header.value("epsilon", 0.0) != p.epsilon || header.value("q", 0.0) != p.q)
        return std::nullopt;
    Mesh mesh(n);
    Eigen::MatrixXd cols(mesh.cells, mesh.cells);
    in.read(reinterpret_cast<char*>(cols.data()),
            static_cast<std::streamsize>(cols.size() * sizeof(double)));
    if (!in) return std::nullopt;
    return HierarchicalBasis{mesh, kind, p, std::move(cols)};
}

void save_chain(const std::filesystem::path& path, const ChainOutput& chain) {
    json header = {{"dim", chain.samples.rows()},
                   {"count", chain.samples.cols()},
                   {"thin", chain.thin},
                   {"layout", "column-major-f64-le"}};
    write_header_and_doubles(path, header, chain.samples.data(),
                             static_cast<size_t>(chain.samples.size()));
}

}  // namespace deblur
