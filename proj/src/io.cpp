#include "trigfit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "trigfit/errors.hpp"

namespace trigfit::io
{

using json = nlohmann::ordered_json;

namespace
{

std::string_view trim(std::string_view s)
{
    const auto issp = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && issp(s.front()))
        s.remove_prefix(1);
    while (!s.empty() && issp(s.back()))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;)
    {
        const auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

bool try_parse(std::string_view f, double& v)
{
    if (!f.empty() && f.front() == '+')
        f.remove_prefix(1);
    if (f.empty())
        return false;
    const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
    return res.ec == std::errc() && res.ptr == f.data() + f.size();
}

Error parse_error(std::size_t line, const std::string& what)
{
    return Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what);
}

json number_array(const std::vector<double>& v)
{
    json a = json::array();
    for (double x : v)
        a.push_back(x);
    return a;
}

std::vector<double> read_array(const json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_array())
        throw Error(ErrorKind::Parse, std::string("model file: missing array '") + key + "'");
    std::vector<double> out;
    for (const auto& e : j.at(key))
    {
        if (!e.is_number())
            throw Error(ErrorKind::Parse,
                        std::string("model file: non-numeric entry in '") + key + "'");
        out.push_back(e.get<double>());
    }
    return out;
}

double read_number(const json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_number())
        throw Error(ErrorKind::Parse, std::string("model file: missing number '") + key + "'");
    return j.at(key).get<double>();
}

json key_values(const KeyValues& kv)
{
    json o = json::object();
    for (const auto& [k, v] : kv)
        o[k] = v;
    return o;
}

KeyValues read_key_values(const json& j)
{
    KeyValues kv;
    if (!j.is_object())
        return kv;
    for (auto it = j.begin(); it != j.end(); ++it)
        kv.emplace_back(it.key(), it.value().is_string() ? it.value().get<std::string>()
                                                          : it.value().dump());
    return kv;
}

} // namespace

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view field, std::size_t line)
{
    double v = 0.0;
    if (!try_parse(trim(field), v))
        throw parse_error(line, "not a number: '" + std::string(field) + "'");
    return v;
}

CsvTable read_csv(std::istream& in)
{
    CsvTable t;
    std::string line;
    std::size_t lineno = 0;
    std::size_t columns = 0;
    bool first = true;
    while (std::getline(in, line))
    {
        ++lineno;
        std::string_view sv = line;
        if (lineno == 1 && sv.starts_with("\xEF\xBB\xBF"))
            sv.remove_prefix(3);
        sv = trim(sv);
        if (sv.empty())
            continue;
        const auto fields = split(sv);
        if (fields.size() > 2)
            throw parse_error(lineno, "expected one or two columns, found " +
                                          std::to_string(fields.size()));
        std::vector<double> vals(fields.size());
        std::size_t numeric = 0;
        for (std::size_t k = 0; k < fields.size(); ++k)
            numeric += try_parse(fields[k], vals[k]) ? 1 : 0;

        if (first && numeric == 0)
        {
            t.header = true;
            columns = fields.size();
            first = false;
            continue;
        }
        if (columns == 0)
            columns = fields.size();
        first = false;
        if (fields.size() != columns)
            throw parse_error(lineno, "expected " + std::to_string(columns) +
                                          " columns, found " + std::to_string(fields.size()));
        for (std::size_t k = 0; k < fields.size(); ++k)
            if (!try_parse(fields[k], vals[k]))
                throw parse_error(lineno, "not a number: '" + std::string(fields[k]) + "'");
        for (double v : vals)
            if (!std::isfinite(v))
                throw parse_error(lineno, "non-finite value");
        if (columns == 2)
        {
            t.x.push_back(vals[0]);
            t.y.push_back(vals[1]);
        }
        else
            t.y.push_back(vals[0]);
    }
    if (t.y.empty())
        throw parse_error(lineno == 0 ? 1 : lineno, "no data rows");
    return t;
}

CsvTable read_csv_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
    return read_csv(in);
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows)
{
    if (!header.empty())
    {
        for (std::size_t k = 0; k < header.size(); ++k)
            out << (k ? "," : "") << header[k];
        out << '\n';
    }
    for (const auto& r : rows)
    {
        for (std::size_t k = 0; k < r.size(); ++k)
            out << (k ? "," : "") << format_double(r[k]);
        out << '\n';
    }
}

void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& rows)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::Parse, "cannot write '" + path + "'");
    write_csv(out, header, rows);
}

double Domain::to_unit(double x) const
{
    return wrap_unit((x - a) / (b - a));
}

SampleGrid to_grid(const CsvTable& t, std::optional<Domain> domain, Domain& used)
{
    const std::size_t n = t.y.size();
    if (t.x.empty())
    {
        used = domain.value_or(Domain{});
        return SampleGrid::equispaced(t.y);
    }
    if (n < 2)
        throw Error(ErrorKind::InvalidArgument, "csv: need at least two samples");
    if (domain)
        used = *domain;
    else
    {
        const double h = (t.x.back() - t.x.front()) / static_cast<double>(n - 1);
        used = Domain{t.x.front(), t.x.back() + h};
    }
    if (!(used.b > used.a))
        throw Error(ErrorKind::InvalidArgument, "csv: empty sample interval");

    const double nd = static_cast<double>(n);
    std::vector<double> loc(n);
    for (std::size_t j = 0; j < n; ++j)
    {
        if (t.x[j] < used.a || t.x[j] >= used.b)
            throw Error(ErrorKind::InvalidArgument,
                        "csv: x outside the domain at row " + std::to_string(j + 1));
        loc[j] = (t.x[j] - used.a) / used.length();
        const double e = static_cast<double>(j) / nd;
        if (std::abs(loc[j] - e) <= 1e-9 / nd)
            loc[j] = e;
    }
    return SampleGrid(std::move(loc), t.y);
}

std::string to_string(const ModelFile& m)
{
    json j;
    j["format_version"] = m.format_version;
    j["kind"] = m.kind();
    j["domain"] = json::array({m.domain.a, m.domain.b});
    json p = json::object();
    if (const auto* r = std::get_if<TrigRational>(&m.model))
    {
        p["nodes"] = number_array(r->nodes());
        p["weights"] = number_array(r->weights());
        p["values"] = number_array(r->node_values());
        p["mean"] = r->mean_offset();
    }
    else
    {
        const auto& s = std::get<ExpSum>(m.model);
        std::vector<double> wr, wi, ar, ai;
        for (std::size_t k = 0; k < s.size(); ++k)
        {
            wr.push_back(s.weights()[k].real());
            wi.push_back(s.weights()[k].imag());
            ar.push_back(s.exponents()[k].real());
            ai.push_back(s.exponents()[k].imag());
        }
        p["weights_real"] = number_array(wr);
        p["weights_imag"] = number_array(wi);
        p["exponents_real"] = number_array(ar);
        p["exponents_imag"] = number_array(ai);
        p["constant"] = s.constant_term();
    }
    j["payload"] = std::move(p);
    j["provenance"] = {{"tool", m.provenance.tool},
                       {"version", m.provenance.version},
                       {"config", key_values(m.provenance.config)},
                       {"report", key_values(m.provenance.report)}};
    return j.dump(2) + "\n";
}

ModelFile from_string(const std::string& text)
{
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw Error(ErrorKind::Parse, std::string("model file: ") + e.what());
    }
    if (!j.is_object())
        throw Error(ErrorKind::Parse, "model file: not an object");
    const auto version = static_cast<int>(read_number(j, "format_version"));
    if (version != model_format_version)
        throw Error(ErrorKind::Parse,
                    "model file: unsupported format_version " + std::to_string(version));
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw Error(ErrorKind::Parse, "model file: missing kind");
    const auto kind = j.at("kind").get<std::string>();
    const auto dom = read_array(j, "domain");
    if (dom.size() != 2 || !(dom[1] > dom[0]))
        throw Error(ErrorKind::Parse, "model file: domain must be [a, b) with a < b");
    if (!j.contains("payload") || !j.at("payload").is_object())
        throw Error(ErrorKind::Parse, "model file: missing payload");
    const auto& p = j.at("payload");

    ModelFile m{version, ExpSum(), Domain{dom[0], dom[1]}, Provenance{}};
    if (kind == "rfun")
    {
        m.model = TrigRational(read_array(p, "nodes"), read_array(p, "weights"),
                               read_array(p, "values"), read_number(p, "mean"));
    }
    else if (kind == "efun")
    {
        const auto wr = read_array(p, "weights_real");
        const auto wi = read_array(p, "weights_imag");
        const auto ar = read_array(p, "exponents_real");
        const auto ai = read_array(p, "exponents_imag");
        if (wi.size() != wr.size() || ar.size() != wr.size() || ai.size() != wr.size())
            throw Error(ErrorKind::Parse, "model file: efun arrays differ in length");
        std::vector<cplx> w(wr.size()), a(wr.size());
        for (std::size_t k = 0; k < wr.size(); ++k)
        {
            w[k] = cplx(wr[k], wi[k]);
            a[k] = cplx(ar[k], ai[k]);
        }
        m.model = ExpSum(std::move(w), std::move(a), read_number(p, "constant"));
    }
    else
        throw Error(ErrorKind::Parse, "model file: unknown kind '" + kind + "'");

    if (j.contains("provenance") && j.at("provenance").is_object())
    {
        const auto& pv = j.at("provenance");
        if (pv.contains("tool") && pv.at("tool").is_string())
            m.provenance.tool = pv.at("tool").get<std::string>();
        if (pv.contains("version") && pv.at("version").is_string())
            m.provenance.version = pv.at("version").get<std::string>();
        if (pv.contains("config"))
            m.provenance.config = read_key_values(pv.at("config"));
        if (pv.contains("report"))
            m.provenance.report = read_key_values(pv.at("report"));
    }
    return m;
}

void save_model(const std::string& path, const ModelFile& m)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::Parse, "cannot write '" + path + "'");
    out << to_string(m);
}

ModelFile load_model(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

} // namespace trigfit::io
