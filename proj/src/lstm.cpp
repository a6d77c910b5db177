#include "hsd/lstm.hpp"

namespace hsd {
namespace {

inline Vec logistic(const Vec& z) {
    return (Real(1) / (Real(1) + (-z.array()).exp())).matrix();
}

}  // namespace

void lstm_cell(const LstmDirParams& p, const Vec& x, const Vec& h_prev, const Vec& c_prev,
               Vec& h, Vec& c) {
    if (x.size() != p.w_in[0].cols() || h_prev.size() != p.w_rec[0].cols() ||
        c_prev.size() != p.bias[0].size()) {
        throw DataError("state dimensions do not match the cell parameters");
    }
    Vec pre[4];
    for (int k = 0; k < 4; ++k) {
        pre[k] = p.w_in[k] * x + p.w_rec[k] * h_prev + p.bias[k];
    }
    const Vec i = logistic(pre[0]);
    const Vec f = logistic(pre[1]);
    const Vec g = pre[2].array().tanh().matrix();
    const Vec o = logistic(pre[3]);
    c = (f.array() * c_prev.array() + i.array() * g.array()).matrix();
    h = (o.array() * c.array().tanh()).matrix();
}

LstmTrace lstm_scan(const LstmDirParams& p, const Mat& inputs) {
    const Eigen::Index steps = inputs.rows();
    const Eigen::Index hidden = p.bias[0].size();

    LstmTrace tr;
    tr.inputs = inputs;
    for (Mat* m : {&tr.i, &tr.f, &tr.g, &tr.o, &tr.c, &tr.tanh_c, &tr.h}) {
        m->resize(steps, hidden);
    }

    Vec h_prev = Vec::Zero(hidden);
    Vec c_prev = Vec::Zero(hidden);
    for (Eigen::Index t = 0; t < steps; ++t) {
        const Vec x = inputs.row(t).transpose();
        Vec pre[4];
        for (int k = 0; k < 4; ++k) {
            pre[k] = p.w_in[k] * x + p.w_rec[k] * h_prev + p.bias[k];
        }
        const Vec i = logistic(pre[0]);
        const Vec f = logistic(pre[1]);
        const Vec g = pre[2].array().tanh().matrix();
        const Vec o = logistic(pre[3]);
        const Vec c = (f.array() * c_prev.array() + i.array() * g.array()).matrix();
        const Vec tc = c.array().tanh().matrix();
        const Vec h = (o.array() * tc.array()).matrix();

        tr.i.row(t) = i.transpose();
        tr.f.row(t) = f.transpose();
        tr.g.row(t) = g.transpose();
        tr.o.row(t) = o.transpose();
        tr.c.row(t) = c.transpose();
        tr.tanh_c.row(t) = tc.transpose();
        tr.h.row(t) = h.transpose();
        h_prev = h;
        c_prev = c;
    }
    return tr;
}

Mat lstm_scan_backward(const LstmDirParams& p, const LstmTrace& trace,
                       const Mat& d_h, LstmDirParams& grads) {
    const Eigen::Index steps = trace.h.rows();
    const Eigen::Index hidden = trace.h.cols();
    Mat d_inputs = Mat::Zero(steps, trace.inputs.cols());

    Vec dh_next = Vec::Zero(hidden);  // via the recurrent connections
    Vec dc_next = Vec::Zero(hidden);
    for (Eigen::Index t = steps - 1; t >= 0; --t) {
        const Vec i = trace.i.row(t).transpose();
        const Vec f = trace.f.row(t).transpose();
        const Vec g = trace.g.row(t).transpose();
        const Vec o = trace.o.row(t).transpose();
        const Vec tc = trace.tanh_c.row(t).transpose();

        const Vec dh = d_h.row(t).transpose() + dh_next;
        Vec dc = (dh.array() * o.array() * (Real(1) - tc.array().square())).matrix() + dc_next;

        const Vec c_prev = t > 0 ? Vec(trace.c.row(t - 1).transpose()) : Vec(Vec::Zero(hidden));
        const Vec h_prev = t > 0 ? Vec(trace.h.row(t - 1).transpose()) : Vec(Vec::Zero(hidden));

        Vec dpre[4];
        dpre[0] = (dc.array() * g.array() * i.array() * (Real(1) - i.array())).matrix();
        dpre[1] = (dc.array() * c_prev.array() * f.array() * (Real(1) - f.array())).matrix();
        dpre[2] = (dc.array() * i.array() * (Real(1) - g.array().square())).matrix();
        dpre[3] = (dh.array() * tc.array() * o.array() * (Real(1) - o.array())).matrix();

        const Vec x = trace.inputs.row(t).transpose();
        Vec dx = Vec::Zero(trace.inputs.cols());
        Vec dh_prev = Vec::Zero(hidden);
        for (int k = 0; k < 4; ++k) {
            grads.w_in[k].noalias() += dpre[k] * x.transpose();
            grads.w_rec[k].noalias() += dpre[k] * h_prev.transpose();
            grads.bias[k] += dpre[k];
            dx.noalias() += p.w_in[k].transpose() * dpre[k];
            dh_prev.noalias() += p.w_rec[k].transpose() * dpre[k];
        }
        d_inputs.row(t) = dx.transpose();
        dh_next = dh_prev;
        dc_next = (dc.array() * f.array()).matrix();
    }
    return d_inputs;
}

}  // namespace hsd
