#include "sddpg/model_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sddpg {

namespace {

std::string hex(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return buf;
}

double parse_double(const std::string& tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str()) throw std::invalid_argument("model file: bad number '" + tok + "'");
    return v;
}

class TokenReader {
  public:
    explicit TokenReader(const std::string& text) : in_(text) {}

    std::string next() {
        std::string tok;
        if (!(in_ >> tok)) throw std::invalid_argument("model file: unexpected end of input");
        return tok;
    }
    double next_double() { return parse_double(next()); }
    long next_long() { return std::stol(next()); }
    int next_int() { return std::stoi(next()); }

    void expect(const std::string& want) {
        const std::string got = next();
        if (got != want)
            throw std::invalid_argument("model file: expected '" + want + "', got '" + got + "'");
    }

  private:
    std::istringstream in_;
};

void write_layers(std::ostringstream& os, const std::vector<Matrix>& weights,
                  const std::vector<Vector>& biases) {
    os << "layers " << weights.size() << "\n";
    for (std::size_t k = 0; k < weights.size(); ++k) {
        os << "layer " << k << " " << weights[k].rows << " " << weights[k].cols << "\n";
        os << "w";
        for (double x : weights[k].data) os << " " << hex(x);
        os << "\nb";
        for (double x : biases[k]) os << " " << hex(x);
        os << "\n";
    }
}

void read_layers(TokenReader& tr, std::vector<Matrix>& weights, std::vector<Vector>& biases) {
    tr.expect("layers");
    const int n = tr.next_int();
    weights.clear();
    biases.clear();
    for (int k = 0; k < n; ++k) {
        tr.expect("layer");
        tr.next_int();  // index, informational
        const int rows = tr.next_int();
        const int cols = tr.next_int();
        Matrix w(rows, cols);
        tr.expect("w");
        for (double& x : w.data) x = tr.next_double();
        Vector b(rows);
        tr.expect("b");
        for (double& x : b) x = tr.next_double();
        weights.push_back(std::move(w));
        biases.push_back(std::move(b));
    }
}

}  // namespace

std::string serialize_model(const ModelFile& m) {
    std::ostringstream os;
    os << "sddpg-model v1\n";
    switch (m.kind) {
        case ModelKind::san: {
            os << "kind san\n";
            os << "lif " << hex(m.lif.v_th) << " " << hex(m.lif.current_decay) << " "
               << hex(m.lif.voltage_decay) << " " << m.lif.timesteps << "\n";
            write_layers(os, m.san.weights, m.san.biases);
            break;
        }
        case ModelKind::critic: {
            os << "kind critic\n";
            const auto& cc = m.critic.config;
            os << "critic-config " << cc.state_dim << " " << cc.action_dim << " "
               << cc.action_layer << " " << cc.hidden.size();
            for (int h : cc.hidden) os << " " << h;
            os << "\n";
            write_layers(os, m.critic.weights, m.critic.biases);
            break;
        }
        case ModelKind::deep: {
            os << "kind deep\n";
            write_layers(os, m.deep.weights, m.deep.biases);
            break;
        }
        case ModelKind::quantized: {
            os << "kind quantized\n";
            os << "lif " << hex(m.lif.v_th) << " " << hex(m.lif.current_decay) << " "
               << hex(m.lif.voltage_decay) << " " << m.lif.timesteps << "\n";
            os << "weight-max " << m.quantized.weight_max << "\n";
            os << "layers " << m.quantized.weights.size() << "\n";
            for (int k = 0; k < m.quantized.layer_count(); ++k) {
                const auto& w = m.quantized.weights[k];
                os << "layer " << k << " " << w.rows << " " << w.cols << " "
                   << hex(m.quantized.ratios[k]) << " " << m.quantized.thresholds[k] << "\n";
                os << "w";
                for (std::int32_t x : w.data) os << " " << x;
                os << "\nb";
                for (std::int64_t x : m.quantized.biases[k]) os << " " << x;
                os << "\n";
            }
            break;
        }
    }
    os << "end\n";
    return os.str();
}

ModelFile parse_model(const std::string& text) {
    TokenReader tr(text);
    tr.expect("sddpg-model");
    tr.expect("v1");
    tr.expect("kind");
    const std::string kind = tr.next();

    ModelFile m;
    if (kind == "san") {
        m.kind = ModelKind::san;
        tr.expect("lif");
        m.lif.v_th = tr.next_double();
        m.lif.current_decay = tr.next_double();
        m.lif.voltage_decay = tr.next_double();
        m.lif.timesteps = tr.next_int();
        read_layers(tr, m.san.weights, m.san.biases);
        m.san.validate();
    } else if (kind == "critic") {
        m.kind = ModelKind::critic;
        tr.expect("critic-config");
        m.critic.config.state_dim = tr.next_int();
        m.critic.config.action_dim = tr.next_int();
        m.critic.config.action_layer = tr.next_int();
        const int hn = tr.next_int();
        m.critic.config.hidden.resize(hn);
        for (int& h : m.critic.config.hidden) h = tr.next_int();
        read_layers(tr, m.critic.weights, m.critic.biases);
        m.critic.validate();
    } else if (kind == "deep") {
        m.kind = ModelKind::deep;
        read_layers(tr, m.deep.weights, m.deep.biases);
    } else if (kind == "quantized") {
        m.kind = ModelKind::quantized;
        tr.expect("lif");
        m.lif.v_th = tr.next_double();
        m.lif.current_decay = tr.next_double();
        m.lif.voltage_decay = tr.next_double();
        m.lif.timesteps = tr.next_int();
        tr.expect("weight-max");
        m.quantized.weight_max = tr.next_int();
        tr.expect("layers");
        const int n = tr.next_int();
        for (int k = 0; k < n; ++k) {
            tr.expect("layer");
            tr.next_int();
            const int rows = tr.next_int();
            const int cols = tr.next_int();
            m.quantized.ratios.push_back(tr.next_double());
            m.quantized.thresholds.push_back(tr.next_long());
            IntMatrix w(rows, cols);
            tr.expect("w");
            for (auto& x : w.data) x = static_cast<std::int32_t>(tr.next_long());
            std::vector<std::int64_t> b(rows);
            tr.expect("b");
            for (auto& x : b) x = tr.next_long();
            m.quantized.weights.push_back(std::move(w));
            m.quantized.biases.push_back(std::move(b));
        }
    } else {
        throw std::invalid_argument("model file: unknown kind '" + kind + "'");
    }
    tr.expect("end");
    return m;
}

void save_model(const ModelFile& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << serialize_model(m);
}

ModelFile load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

void save_san(const SanParams& p, const LifConfig& cfg, const std::string& path) {
    ModelFile m;
    m.kind = ModelKind::san;
    m.lif = cfg;
    m.san = p;
    save_model(m, path);
}

void save_critic(const CriticParams& p, const std::string& path) {
    ModelFile m;
    m.kind = ModelKind::critic;
    m.critic = p;
    save_model(m, path);
}

void save_deep(const DeepActorParams& p, const std::string& path) {
    ModelFile m;
    m.kind = ModelKind::deep;
    m.deep = p;
    save_model(m, path);
}

void save_quantized(const QuantizedSan& q, const LifConfig& cfg, const std::string& path) {
    ModelFile m;
    m.kind = ModelKind::quantized;
    m.lif = cfg;
    m.quantized = q;
    save_model(m, path);
}

// ------------------------------ checkpoints ------------------------------

namespace {

constexpr char kCkptMagic[] = "SDDPG-CKPT v1\n";

void put_u64(std::ostream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void put_i64(std::ostream& os, std::int64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void put_double(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void put_doubles(std::ostream& os, const double* p, std::size_t n) {
    os.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}

std::uint64_t get_u64(std::istream& is) {
    std::uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

std::int64_t get_i64(std::istream& is) {
    std::int64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

double get_double(std::istream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

void get_doubles(std::istream& is, double* p, std::size_t n) {
    is.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}

void put_net(std::ostream& os, const std::vector<Matrix>& w, const std::vector<Vector>& b) {
    put_u64(os, w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
        put_u64(os, static_cast<std::uint64_t>(w[k].rows));
        put_u64(os, static_cast<std::uint64_t>(w[k].cols));
        put_doubles(os, w[k].data.data(), w[k].data.size());
        put_doubles(os, b[k].data(), b[k].size());
    }
}

void get_net(std::istream& is, std::vector<Matrix>& w, std::vector<Vector>& b) {
    const std::size_t n = get_u64(is);
    w.clear();
    b.clear();
    for (std::size_t k = 0; k < n; ++k) {
        const int rows = static_cast<int>(get_u64(is));
        const int cols = static_cast<int>(get_u64(is));
        Matrix m(rows, cols);
        get_doubles(is, m.data.data(), m.data.size());
        Vector bias(rows);
        get_doubles(is, bias.data(), bias.size());
        w.push_back(std::move(m));
        b.push_back(std::move(bias));
    }
}

void put_optimizer(std::ostream& os, const Optimizer& opt) {
    put_u64(os, opt.kind == OptimizerKind::adam ? 1 : 0);
    put_double(os, opt.learning_rate);
    put_i64(os, opt.adam.step);
    put_net(os, opt.adam.m_w, opt.adam.m_b);
    put_net(os, opt.adam.v_w, opt.adam.v_b);
}

void get_optimizer(std::istream& is, Optimizer& opt) {
    opt.kind = get_u64(is) == 1 ? OptimizerKind::adam : OptimizerKind::sgd;
    opt.learning_rate = get_double(is);
    opt.adam.step = get_i64(is);
    get_net(is, opt.adam.m_w, opt.adam.m_b);
    get_net(is, opt.adam.v_w, opt.adam.v_b);
}

}  // namespace

void save_checkpoint(const TrainState& st, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write checkpoint: " + path);
    os.write(kCkptMagic, sizeof(kCkptMagic) - 1);

    put_u64(os, static_cast<std::uint64_t>(st.kind));
    put_net(os, st.san.weights, st.san.biases);
    put_net(os, st.san_target.weights, st.san_target.biases);
    put_net(os, st.deep.weights, st.deep.biases);
    put_net(os, st.deep_target.weights, st.deep_target.biases);

    const auto& cc = st.critic.config;
    put_u64(os, static_cast<std::uint64_t>(cc.state_dim));
    put_u64(os, static_cast<std::uint64_t>(cc.action_dim));
    put_u64(os, static_cast<std::uint64_t>(cc.action_layer));
    put_u64(os, cc.hidden.size());
    for (int h : cc.hidden) put_u64(os, static_cast<std::uint64_t>(h));
    put_net(os, st.critic.weights, st.critic.biases);
    put_net(os, st.critic_target.weights, st.critic_target.biases);

    put_optimizer(os, st.actor_opt);
    put_optimizer(os, st.critic_opt);

    const auto rng_state = st.rng.save_state();
    for (auto word : rng_state) put_u64(os, word);
    put_u64(os, st.seed);
    put_i64(os, st.global_step);
    put_u64(os, st.update_counter);
    put_i64(os, st.episode_index);
    put_i64(os, st.stage_index);

    put_u64(os, st.buffer.capacity());
    put_u64(os, st.buffer.size());
    for (std::size_t i = 0; i < st.buffer.size(); ++i) {
        const Transition& tr = st.buffer.at(i);
        put_u64(os, tr.state.size());
        put_doubles(os, tr.state.data(), tr.state.size());
        put_double(os, tr.action[0]);
        put_double(os, tr.action[1]);
        put_double(os, tr.reward);
        put_doubles(os, tr.next_state.data(), tr.next_state.size());
        put_u64(os, static_cast<std::uint64_t>(tr.cause));
    }
}

TrainState load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::invalid_argument("cannot open checkpoint: " + path);
    char magic[sizeof(kCkptMagic) - 1];
    is.read(magic, sizeof(magic));
    if (std::memcmp(magic, kCkptMagic, sizeof(magic)) != 0)
        throw std::invalid_argument("checkpoint: bad magic header");

    TrainState st;
    st.kind = static_cast<ActorKind>(get_u64(is));
    get_net(is, st.san.weights, st.san.biases);
    get_net(is, st.san_target.weights, st.san_target.biases);
    get_net(is, st.deep.weights, st.deep.biases);
    get_net(is, st.deep_target.weights, st.deep_target.biases);

    auto& cc = st.critic.config;
    cc.state_dim = static_cast<int>(get_u64(is));
    cc.action_dim = static_cast<int>(get_u64(is));
    cc.action_layer = static_cast<int>(get_u64(is));
    cc.hidden.resize(get_u64(is));
    for (int& h : cc.hidden) h = static_cast<int>(get_u64(is));
    get_net(is, st.critic.weights, st.critic.biases);
    st.critic_target.config = cc;
    get_net(is, st.critic_target.weights, st.critic_target.biases);

    get_optimizer(is, st.actor_opt);
    get_optimizer(is, st.critic_opt);

    std::array<std::uint64_t, 4> rng_state;
    for (auto& word : rng_state) word = get_u64(is);
    st.rng.restore_state(rng_state);
    st.seed = get_u64(is);
    st.global_step = get_i64(is);
    st.update_counter = get_u64(is);
    st.episode_index = get_i64(is);
    st.stage_index = static_cast<int>(get_i64(is));

    const std::size_t capacity = get_u64(is);
    const std::size_t count = get_u64(is);
    st.buffer = ReplayBuffer(capacity);
    for (std::size_t i = 0; i < count; ++i) {
        Transition tr;
        tr.state.resize(get_u64(is));
        get_doubles(is, tr.state.data(), tr.state.size());
        tr.action[0] = get_double(is);
        tr.action[1] = get_double(is);
        tr.reward = get_double(is);
        tr.next_state.resize(tr.state.size());
        get_doubles(is, tr.next_state.data(), tr.next_state.size());
        tr.cause = static_cast<TerminalCause>(get_u64(is));
        st.buffer.push(std::move(tr));
    }
    if (!is) throw std::invalid_argument("checkpoint: truncated file");
    return st;
}

}  // namespace sddpg
