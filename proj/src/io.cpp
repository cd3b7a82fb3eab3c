#include "kiva/io.hpp"

#include <fstream>
#include <sstream>

#include "kiva/error.hpp"

namespace kiva {

using nlohmann::json;

namespace {

template <typename T>
T require(const json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) fail(ErrorKind::invalid_input, std::string("missing field '") + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(ErrorKind::invalid_input, std::string("field '") + key + "': " + e.what());
    }
}

} // namespace

json instance_to_json(const Instance& instance) {
    return json{{"sku_count", instance.sku_count},
                {"stations", instance.stations},
                {"capacity", instance.capacity},
                {"orders", instance.order_lists()},
                {"racks", instance.rack_lists()}};
}

Instance instance_from_json(const json& doc) {
    const auto sku_count = require<std::size_t>(doc, "sku_count");
    const auto stations = require<std::size_t>(doc, "stations");
    const auto capacity = require<std::size_t>(doc, "capacity");
    const auto orders = require<std::vector<std::vector<SkuId>>>(doc, "orders");
    const auto racks = require<std::vector<std::vector<SkuId>>>(doc, "racks");
    return Instance::from_lists(sku_count, stations, capacity, orders, racks);
}

json solution_to_json(const Solution& solution) {
    return json{{"theta", solution.theta.stations}, {"mu", solution.mu.stations}};
}

Solution solution_from_json(const json& doc) {
    Solution s;
    s.theta.stations = require<std::vector<OrderSequence>>(doc, "theta");
    s.mu.stations = require<std::vector<RackSequence>>(doc, "mu");
    return s;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::invalid_input, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::invalid_input, path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

} // namespace kiva
