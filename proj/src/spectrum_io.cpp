#include "selberg/spectrum_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

namespace selberg::spectrum {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_rational(const mpq_class& q) {
    return q.get_str();  // canonical "p" or "p/q"
}

mpq_class parse_rational(const std::string& s) {
    if (s.empty()) throw std::runtime_error("empty rational");
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw std::runtime_error("bad rational '" + s + "'");
        q.canonicalize();
        return q;
    }
    // decimal literal: sign? digits '.' digits
    std::string head = s.substr(0, dot), frac = s.substr(dot + 1);
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
        throw std::runtime_error("bad decimal '" + s + "'");
    bool neg = !head.empty() && head[0] == '-';
    if (neg) head = head.substr(1);
    if (head.empty()) head = "0";
    if (head.find_first_not_of("0123456789") != std::string::npos)
        throw std::runtime_error("bad decimal '" + s + "'");
    mpz_class whole(head), num(frac.empty() ? "0" : frac);
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    mpq_class q(whole * den + num, den);
    q.canonicalize();
    if (neg) q = -q;
    return q;
}

namespace {

constexpr const char* kMagic = "# selberg-spectrum v1 X=";
constexpr const char* kColumns = "n,m_num,m_den,log_eps,lambda_bar,components";

std::string render(const SpectrumTable& table) {
    std::string out;
    out += kMagic;
    out += format_double(table.X);
    out += " weight=";
    out += table.weight.spec;
    out += "\n";
    out += kColumns;
    out += "\n";
    for (const auto& e : table.entries) {
        out += std::to_string(e.n);
        out += ',';
        out += e.m.get_num().get_str();
        out += ',';
        out += e.m.get_den().get_str();
        out += ',';
        out += format_double(e.log_eps);
        out += ',';
        out += format_double(e.lambda_bar);
        out += ',';
        bool first = true;
        for (const auto& c : e.components) {
            if (!first) out += '|';
            first = false;
            out += std::to_string(c.u);
            out += ':';
            out += std::to_string(c.D);
            out += ':';
            out += std::to_string(c.j);
            out += ':';
            out += std::to_string(c.h);
            out += ':';
            out += format_rational(c.lambda);
        }
        out += '\n';
    }
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

long long parse_ll(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("bad integer for ") + what + ": '" + s + "'");
    }
}

double parse_double(const std::string& s, const char* what) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty())
        throw std::runtime_error(std::string("bad float for ") + what + ": '" + s + "'");
    return v;
}

WeightMode weight_from_spec_label(const std::string& spec) {
    if (spec == "unity") return WeightMode::unity();
    if (spec.rfind("index:", 0) == 0)
        return WeightMode::index_bound(parse_ll(spec.substr(6), "weight index"));
    if (spec.rfind("table:", 0) == 0) {
        // label only: per-component lambdas live in the rows
        WeightMode w;
        w.kind = WeightMode::Kind::table;
        w.spec = spec;
        return w;
    }
    throw std::runtime_error("unknown weight spec '" + spec + "'");
}

}  // namespace

void write_cache(const SpectrumTable& table, const std::filesystem::path& path) {
    std::string body = render(table);
    std::filesystem::path dir = path.parent_path();
    if (dir.empty()) dir = ".";
    std::random_device rd;
    std::filesystem::path tmp =
        dir / (path.filename().string() + ".tmp" + std::to_string(rd() % 1000000));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(body.data(), static_cast<std::streamsize>(body.size()));
        if (!out) {
            std::filesystem::remove(tmp);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("rename to " + path.string() + " failed: " + ec.message());
    }
}

SpectrumTable read_cache(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
    if (line.rfind(kMagic, 0) != 0)
        throw std::runtime_error(path.string() + ":1: not a selberg-spectrum v1 cache");
    std::string rest = line.substr(std::strlen(kMagic));
    auto wpos = rest.find(" weight=");
    if (wpos == std::string::npos)
        throw std::runtime_error(path.string() + ":1: missing weight field");
    SpectrumTable table;
    table.X = parse_double(rest.substr(0, wpos), "X");
    table.weight = weight_from_spec_label(rest.substr(wpos + 8));
    if (!std::getline(in, line) || line != kColumns)
        throw std::runtime_error(path.string() + ":2: bad column header");
    long long lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto ctx = [&](const std::string& msg) {
            return std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + msg);
        };
        auto cols = split(line, ',');
        if (cols.size() != 6) throw ctx("expected 6 columns");
        SpectrumEntry e;
        e.n = parse_ll(cols[0], "n");
        mpz_class num, den;
        if (num.set_str(cols[1], 10) != 0) throw ctx("bad m_num");
        if (den.set_str(cols[2], 10) != 0 || den <= 0) throw ctx("bad m_den");
        e.m = mpq_class(num, den);
        e.m.canonicalize();
        e.log_eps = parse_double(cols[3], "log_eps");
        e.lambda_bar = parse_double(cols[4], "lambda_bar");
        e.eps = eps_of(e.n);
        if (!cols[5].empty()) {
            for (const auto& comp : split(cols[5], '|')) {
                auto fields = split(comp, ':');
                if (fields.size() != 5) throw ctx("bad component '" + comp + "'");
                Component c;
                c.u = parse_ll(fields[0], "u");
                c.D = parse_ll(fields[1], "D");
                c.j = parse_ll(fields[2], "j");
                c.h = parse_ll(fields[3], "h");
                try {
                    c.lambda = parse_rational(fields[4]);
                } catch (const std::exception& ex) {
                    throw ctx(ex.what());
                }
                e.components.push_back(std::move(c));
            }
        }
        if (e.n < 3) throw ctx("n < 3");
        long long expect = 3 + static_cast<long long>(table.entries.size());
        if (e.n != expect) throw ctx("rows not dense in n");
        table.entries.push_back(std::move(e));
    }
    return table;
}

std::map<long long, mpq_class> read_weight_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open weight table " + path.string());
    std::map<long long, mpq_class> out;
    std::string line;
    long long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\r' || line.back() == '\t'))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        line = line.substr(start);
        auto cols = split(line, ',');
        if (cols.size() != 2)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": expected 'D,lambda'");
        for (auto& col : cols) {
            auto b = col.find_first_not_of(" \t");
            auto e = col.find_last_not_of(" \t");
            col = (b == std::string::npos) ? "" : col.substr(b, e - b + 1);
        }
        long long d = parse_ll(cols[0], "D");
        mpq_class lam;
        try {
            lam = parse_rational(cols[1]);
        } catch (const std::exception& ex) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " +
                                     ex.what());
        }
        if (lam < 0)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": lambda must be >= 0");
        out[d] = lam;
    }
    return out;
}

}  // namespace selberg::spectrum
