#include "bvq/field_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bvq {

namespace {

constexpr const char* kMagic = "# bvq-field v1";

std::string fmt(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw std::runtime_error("malformed number '" + s + "'");
    return v;
}

void put_le(std::ostream& os, double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

double get_le(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("truncated binary payload");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

}  // namespace

void write_field(std::ostream& os, const Field& u, Encoding enc) {
    const auto& d = u.domain();
    const int n = d.dim();
    os << kMagic << '\n';
    os << "dim " << n << '\n';
    os << "lower";
    for (int a = 0; a < n; ++a) os << ' ' << fmt(d.lower()[a]);
    os << "\nupper";
    for (int a = 0; a < n; ++a) os << ' ' << fmt(d.upper()[a]);
    os << "\ncells";
    for (int a = 0; a < n; ++a) os << ' ' << d.cells()[a];
    os << "\ncodomain_dim " << u.codim() << '\n';
    if (u.is_analytic()) {
        os << "kind analytic\ncatalog " << u.analytic()->catalog_id << '\n';
        for (const auto& [k, v] : u.analytic()->params) os << "param " << k << ' ' << fmt(v) << '\n';
    } else {
        os << "kind sampled\n";
    }
    os << "compact_support " << (u.compact_support() ? 1 : 0) << '\n';
    os << "mask " << (u.has_mask() ? "present" : "none") << '\n';
    os << "encoding " << (enc == Encoding::binary_le ? "binary-le" : "csv") << '\n';
    os << "end_header\n";

    const auto vals = u.values();
    const auto cd = static_cast<std::size_t>(u.codim());
    if (enc == Encoding::binary_le) {
        for (double v : vals) put_le(os, v);
        if (u.has_mask()) {
            const auto m = u.mask();
            os.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size()));
        }
    } else {
        for (std::size_t i = 0; i < d.cell_count(); ++i) {
            for (std::size_t k = 0; k < cd; ++k) os << (k ? "," : "") << fmt(vals[i * cd + k]);
            if (u.has_mask()) os << ',' << (u.masked(i) ? 1 : 0);
            os << '\n';
        }
    }
    if (!os) throw std::runtime_error("failed writing field");
}

void write_field(const std::filesystem::path& path, const Field& u, Encoding enc) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_field(os, u, enc);
}

Field read_field(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kMagic) throw std::runtime_error("not a bvq field file (bad magic line)");
    int dim = 0, codim = 1;
    std::vector<double> lower, upper;
    std::vector<int> cells;
    bool compact = false, has_mask = false, binary = true, analytic = false;
    AnalyticSpec spec;
    bool ended = false;
    while (std::getline(is, line)) {
        if (line == "end_header") {
            ended = true;
            break;
        }
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        std::string tok;
        if (key == "dim") {
            ls >> dim;
        } else if (key == "lower" || key == "upper") {
            auto& dst = key == "lower" ? lower : upper;
            while (ls >> tok) dst.push_back(parse_double(tok));
        } else if (key == "cells") {
            int c;
            while (ls >> c) cells.push_back(c);
        } else if (key == "codomain_dim") {
            ls >> codim;
        } else if (key == "kind") {
            ls >> tok;
            if (tok != "analytic" && tok != "sampled") throw std::runtime_error("unknown kind '" + tok + "'");
            analytic = tok == "analytic";
        } else if (key == "catalog") {
            ls >> spec.catalog_id;
        } else if (key == "param") {
            std::string name;
            ls >> name >> tok;
            spec.params[name] = parse_double(tok);
        } else if (key == "compact_support") {
            int c = 0;
            ls >> c;
            compact = c != 0;
        } else if (key == "mask") {
            ls >> tok;
            if (tok != "present" && tok != "none") throw std::runtime_error("mask must be 'present' or 'none'");
            has_mask = tok == "present";
        } else if (key == "encoding") {
            ls >> tok;
            if (tok != "binary-le" && tok != "csv") throw std::runtime_error("unknown encoding '" + tok + "'");
            binary = tok == "binary-le";
        } else if (!key.empty() && key[0] != '#') {
            throw std::runtime_error("unknown header key '" + key + "'");
        }
        if (ls.fail() && !ls.eof()) throw std::runtime_error("malformed header line '" + line + "'");
    }
    if (!ended) throw std::runtime_error("missing end_header");
    Domain d = make_domain(dim, lower, upper, cells);
    const std::size_t n = d.cell_count();
    const auto cd = static_cast<std::size_t>(codim);
    if (codim < 1) throw std::runtime_error("codomain_dim must be positive");
    std::vector<double> values(n * cd);
    std::vector<std::uint8_t> mask;
    if (binary) {
        for (auto& v : values) v = get_le(is);
        if (has_mask) {
            mask.resize(n);
            if (!is.read(reinterpret_cast<char*>(mask.data()), static_cast<std::streamsize>(n)))
                throw std::runtime_error("truncated mask payload");
        }
    } else {
        if (has_mask) mask.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::getline(is, line)) throw std::runtime_error("truncated csv payload");
            std::istringstream ls(line);
            std::string tok;
            for (std::size_t k = 0; k < cd; ++k) {
                if (!std::getline(ls, tok, ',')) throw std::runtime_error("csv row has too few columns");
                values[i * cd + k] = parse_double(tok);
            }
            if (has_mask) {
                if (!std::getline(ls, tok, ',')) throw std::runtime_error("csv row lacks mask column");
                mask[i] = tok == "1" ? 1 : 0;
            }
        }
    }
    std::optional<AnalyticSpec> a;
    if (analytic && !spec.catalog_id.empty()) a = spec;
    return Field(std::move(d), codim, std::move(values), std::move(mask), compact, std::move(a));
}

Field read_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
    return read_field(is);
}

}  // namespace bvq
