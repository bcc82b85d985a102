#include "wildseg/io.hpp"

#include "wildseg/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

namespace wildseg {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view token) {
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        return std::nullopt;
    }
    return value;
}

} // namespace

std::string format_number(double value) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buf.data(), ptr);
}

TimeSeries parse_series(std::istream &in) {
    std::vector<double> values;
    std::string line;
    std::size_t line_number = 0;
    bool seen_content = false;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string_view token = trim(line);
        if (token.empty()) {
            continue;
        }
        const std::optional<double> value = parse_number(token);
        if (!value) {
            if (!seen_content) {
                seen_content = true;
                continue;
            }
            throw IoError("not a number: '" + std::string(token) + "'", line_number);
        }
        seen_content = true;
        if (!std::isfinite(*value)) {
            throw IoError("non-finite value", line_number);
        }
        values.push_back(*value);
    }
    if (in.bad()) {
        throw IoError("read error");
    }
    return TimeSeries(std::move(values));
}

TimeSeries read_series_csv(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return parse_series(in);
}

void write_text(const std::filesystem::path &path, const std::string &content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << content;
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

} // namespace wildseg
