#include "sgail/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sgail {

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_values(std::ostringstream& out, const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << fmt_double(values[i]);
        out << (((i + 1) % 8 == 0 || i + 1 == values.size()) ? '\n' : ' ');
    }
}

std::vector<double> read_values(std::istringstream& in, std::size_t n, const char* what) {
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i)
        if (!(in >> values[i]))
            throw std::runtime_error(std::string("checkpoint: truncated ") + what);
    return values;
}

} // namespace

const Checkpoint::NetEntry& Checkpoint::net(const std::string& name) const {
    for (const auto& n : nets)
        if (n.name == name) return n;
    throw std::runtime_error("checkpoint has no net named '" + name + "'");
}

bool Checkpoint::has_net(const std::string& name) const {
    for (const auto& n : nets)
        if (n.name == name) return true;
    return false;
}

std::string Checkpoint::meta_at(const std::string& key) const {
    auto it = meta.find(key);
    if (it == meta.end()) throw std::runtime_error("checkpoint missing meta key '" + key + "'");
    return it->second;
}

std::string Checkpoint::serialize() const {
    std::ostringstream out;
    out << kMagic << '\n';
    for (const auto& [k, v] : meta) out << "meta " << k << ' ' << v << '\n';
    for (const auto& n : nets) {
        out << "net " << n.name << '\n';
        out << "spec in " << n.spec.input_dim << " hidden " << n.spec.hidden_layers.size();
        for (int h : n.spec.hidden_layers) out << ' ' << h;
        out << " out " << n.spec.output_dim << " act leaky-relu head "
            << (n.spec.output_head == OutputHead::Softmax ? "softmax" : "linear") << '\n';
        out << "params " << n.params.size() << '\n';
        std::ostringstream vals;
        write_values(vals, n.params);
        out << vals.str();
        for (const auto& [name, values] : n.extras) {
            out << "extra " << name << ' ' << values.size() << '\n';
            std::ostringstream evals;
            write_values(evals, values);
            out << evals.str();
        }
    }
    out << "end\n";
    return out.str();
}

void Checkpoint::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint file " + path);
    out << serialize();
}

Checkpoint Checkpoint::parse(const std::string& text) {
    std::istringstream in(text);
    std::string token;
    if (!(in >> token) || token != kMagic)
        throw std::runtime_error("checkpoint: bad magic header");

    Checkpoint ckpt;
    NetEntry* cur = nullptr;
    while (in >> token) {
        if (token == "meta") {
            std::string key;
            in >> key;
            std::string value;
            std::getline(in, value);
            if (!value.empty() && value.front() == ' ') value.erase(0, 1);
            ckpt.meta[key] = value;
        } else if (token == "net") {
            std::string name;
            in >> name;
            ckpt.nets.push_back({name, {}, {}, {}});
            cur = &ckpt.nets.back();
        } else if (token == "spec") {
            if (!cur) throw std::runtime_error("checkpoint: spec before net");
            std::string kw;
            std::size_t n_hidden = 0;
            in >> kw >> cur->spec.input_dim;   // "in"
            in >> kw >> n_hidden;              // "hidden"
            cur->spec.hidden_layers.resize(n_hidden);
            for (auto& h : cur->spec.hidden_layers) in >> h;
            in >> kw >> cur->spec.output_dim;  // "out"
            std::string act, head;
            in >> kw >> act;  // "act"
            in >> kw >> head; // "head"
            if (act != "leaky-relu") throw std::runtime_error("checkpoint: unknown activation");
            if (head == "softmax")
                cur->spec.output_head = OutputHead::Softmax;
            else if (head == "linear")
                cur->spec.output_head = OutputHead::Linear;
            else
                throw std::runtime_error("checkpoint: unknown output head");
        } else if (token == "params") {
            if (!cur) throw std::runtime_error("checkpoint: params before net");
            std::size_t n = 0;
            in >> n;
            if (static_cast<int>(n) != cur->spec.param_count())
                throw std::runtime_error("checkpoint: param count does not match spec");
            cur->params = read_values(in, n, "params");
        } else if (token == "extra") {
            if (!cur) throw std::runtime_error("checkpoint: extra before net");
            std::string name;
            std::size_t n = 0;
            in >> name >> n;
            cur->extras[name] = read_values(in, n, "extra");
        } else if (token == "end") {
            return ckpt;
        } else {
            throw std::runtime_error("checkpoint: unknown token '" + token + "'");
        }
    }
    throw std::runtime_error("checkpoint: missing end marker");
}

Checkpoint Checkpoint::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read checkpoint file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

} // namespace sgail
