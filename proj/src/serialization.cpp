#include "sigsde/serialization.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sigsde {

std::string format_double(double value) {
    char buffer[40];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buffer, ptr);
}

namespace {

double parse_double(std::string_view text, const char* context) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument(std::string(context) + ": bad number '" +
                                    std::string(text) + "'");
    return value;
}

void require_keys(const nlohmann::json& j, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional, const char* context) {
    for (const char* key : required)
        if (!j.contains(key))
            throw std::invalid_argument(std::string(context) + ": missing key '" + key + "'");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* k : required) known = known || key == k;
        for (const char* k : optional) known = known || key == k;
        if (!known)
            throw std::invalid_argument(std::string(context) + ": unknown key '" + key + "'");
    }
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t begin = 0;
    while (true) {
        std::size_t end = line.find(sep, begin);
        if (end == std::string::npos) {
            out.push_back(line.substr(begin));
            return out;
        }
        out.push_back(line.substr(begin, end - begin));
        begin = end + 1;
    }
}

std::vector<std::string> non_empty_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

} // namespace

nlohmann::json functional_to_json(const LinearFunctional& f) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [word, coef] : f.terms()) {
        nlohmann::json letters = nlohmann::json::array();
        for (std::size_t i = 0; i < word.length(); ++i) letters.push_back(word.letter(i));
        terms.push_back({{"word", std::move(letters)}, {"coef", coef}});
    }
    return {{"d", f.alphabet_size()}, {"terms", std::move(terms)}};
}

LinearFunctional functional_from_json(const nlohmann::json& j, int max_order) {
    require_keys(j, {"d", "terms"}, {}, "functional");
    LinearFunctional f(j.at("d").get<int>(), max_order);
    for (const auto& term : j.at("terms")) {
        require_keys(term, {"word", "coef"}, {}, "functional term");
        std::vector<int> letters = term.at("word").get<std::vector<int>>();
        f.add_term(MultiIndex(f.alphabet_size(), letters), term.at("coef").get<double>());
    }
    return f;
}

nlohmann::json params_to_json(const SigSdeParams& params) {
    return {{"N", params.order}, {"x0", params.x0}, {"ell", functional_to_json(params.ell)}};
}

SigSdeParams params_from_json(const nlohmann::json& j) {
    require_keys(j, {"N", "x0", "ell"}, {}, "model parameters");
    const int order = j.at("N").get<int>();
    return SigSdeParams(order, j.at("x0").get<double>(),
                        functional_from_json(j.at("ell"), order));
}

nlohmann::json payoff_to_json(const SignaturePayoff& payoff) {
    nlohmann::json j = functional_to_json(payoff.phi);
    j["maturity"] = payoff.maturity;
    j["order"] = payoff.order;
    return j;
}

SignaturePayoff payoff_from_json(const nlohmann::json& j) {
    require_keys(j, {"d", "terms", "maturity", "order"}, {}, "signature payoff");
    const int order = j.at("order").get<int>();
    nlohmann::json functional{{"d", j.at("d")}, {"terms", j.at("terms")}};
    return SignaturePayoff{functional_from_json(functional, order), order,
                           j.at("maturity").get<double>()};
}

std::string path_to_csv(const DiscretePath& path) {
    std::string out = "time";
    for (int c = 1; c <= path.dimension(); ++c) out += ",c" + std::to_string(c);
    out += '\n';
    for (std::size_t i = 0; i < path.sample_count(); ++i) {
        out += format_double(path.time(i));
        for (int c = 0; c < path.dimension(); ++c) {
            out += ',';
            out += format_double(path.value(i, c));
        }
        out += '\n';
    }
    return out;
}

DiscretePath path_from_csv(const std::string& csv) {
    auto lines = non_empty_lines(csv);
    if (lines.size() < 3) throw std::invalid_argument("path csv: need a header and two samples");
    const auto header = split(lines[0], ',');
    if (header.size() < 2 || header[0] != "time")
        throw std::invalid_argument("path csv: header must be time,c1,...,cd");
    const int dim = static_cast<int>(header.size()) - 1;
    for (int c = 0; c < dim; ++c)
        if (header[c + 1] != "c" + std::to_string(c + 1))
            throw std::invalid_argument("path csv: header must be time,c1,...,cd");

    std::vector<double> times, values;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i], ',');
        if (cells.size() != header.size())
            throw std::invalid_argument("path csv: row width mismatch at line " +
                                        std::to_string(i + 1));
        times.push_back(parse_double(cells[0], "path csv"));
        for (int c = 0; c < dim; ++c) values.push_back(parse_double(cells[c + 1], "path csv"));
    }
    return DiscretePath(std::move(times), std::move(values), dim);
}

std::string instruments_to_csv(const std::vector<MarketInstrument>& instruments) {
    std::string out = "kind,strike,maturity,barrier,price\n";
    for (const auto& inst : instruments) {
        out += to_string(inst.kind);
        out += ',' + format_double(inst.strike);
        out += ',' + format_double(inst.maturity);
        out += ',';
        if (is_barrier(inst.kind)) out += format_double(inst.barrier);
        out += ',';
        if (inst.observed_price) out += format_double(*inst.observed_price);
        out += '\n';
    }
    return out;
}

std::vector<MarketInstrument> instruments_from_csv(const std::string& csv) {
    auto lines = non_empty_lines(csv);
    if (lines.empty() || lines[0] != "kind,strike,maturity,barrier,price")
        throw std::invalid_argument("instrument csv: bad header");
    std::vector<MarketInstrument> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i], ',');
        if (cells.size() != 5)
            throw std::invalid_argument("instrument csv: row width mismatch at line " +
                                        std::to_string(i + 1));
        MarketInstrument inst;
        inst.kind = instrument_kind_from_string(cells[0]);
        inst.strike = parse_double(cells[1], "instrument csv");
        inst.maturity = parse_double(cells[2], "instrument csv");
        inst.barrier = cells[3].empty() ? 0.0 : parse_double(cells[3], "instrument csv");
        if (!cells[4].empty()) inst.observed_price = parse_double(cells[4], "instrument csv");
        validate_instrument(inst);
        out.push_back(inst);
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace sigsde
