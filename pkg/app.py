import os
import tempfile

import pandas as pd
import streamlit as st

from src.arraycode import code_stats, load_code, paper_example, render_array, save_code
from src.bounds import bound_report, bound_table
from src.constructions import best_construction, describe_types, get_construction
from src.constructions.registry import family_names
from src.emulator import emulate_trials
from src.errors import PirArrayError
from src.export import bound_table_frame, save_table
from src.utils import family_slug, frac_str, parse_rational
from src.verifier import check_certificate, exact_k, load_certificate, save_certificate

st.set_page_config(page_title="PIR array codes", layout="wide")

st.title("PIR array codes")
st.caption("Flow: pick (s, t) -> build a family -> check its certificate -> compare against the rate bounds")

with st.sidebar:
    st.header("Settings")
    max_servers = st.number_input("Server cap", min_value=1, value=20000, step=1000)
    exact_limit = st.number_input("Exact verification up to m =", min_value=0, value=14, step=1)
    trials = st.number_input("Emulation databases", min_value=1, value=20, step=1)
    seed = st.number_input("Seed", min_value=0, value=0, step=1)

if "built" not in st.session_state:
    st.session_state["built"] = None

tab_build, tab_verify, tab_bounds = st.tabs(["Construct", "Verify a file", "Bounds"])

with tab_build:
    st.subheader("1) Parameters")
    col_a, col_b, col_c = st.columns(3)
    with col_a:
        s_text = st.text_input("s (a/b or integer)", value="2")
    with col_b:
        t = st.number_input("t (cells per server)", min_value=1, value=2, step=1)
    with col_c:
        family = st.selectbox("Family", ["auto"] + family_names())

    if st.button("2) Build", type="primary"):
        try:
            s = parse_rational(s_text)
            name = best_construction(s, int(t)) if family == "auto" else family
            if name is None:
                raise PirArrayError(f"no family handles s={frac_str(s)}, t={int(t)}")
            with st.spinner(f"Building {name}..."):
                out = get_construction(name).build(s, int(t), max_servers=int(max_servers))
            st.session_state["built"] = out
            st.success(f"{name}: m={out.predicted_m} k={out.predicted_k} rate={frac_str(out.rate)}")
        except PirArrayError as e:
            st.session_state["built"] = None
            st.error(str(e))

    out = st.session_state.get("built")
    if out is not None:
        st.subheader("3) Server types")
        st.dataframe(pd.DataFrame(describe_types(out)), use_container_width=True)

        ok, violation = check_certificate(out.code, out.certificate)
        if ok:
            st.success(f"Certificate checks out: {out.predicted_k} disjoint recovery sets per part.")
        else:
            st.error(f"Certificate rejected: {violation}")

        stats = code_stats(out.code, out.predicted_k)
        st.write(
            f"s={frac_str(stats.s)}, storage overhead t*m/p={frac_str(stats.storage_overhead)}, "
            f"rate={frac_str(stats.rate)} ({float(stats.rate):.6f})"
        )

        if out.predicted_m <= int(exact_limit):
            with st.spinner("Exact verification..."):
                report = exact_k(out.code, exact_limit=int(exact_limit))
            st.write(f"Exact k = {report.k} (predicted {out.predicted_k})")

        if out.code.m <= 60:
            st.subheader("Array")
            st.dataframe(pd.DataFrame(render_array(out.code)), use_container_width=True)

        if st.button("Emulate retrieval"):
            with st.spinner("Recovering every part from every set..."):
                emu = emulate_trials(out.code, out.certificate, trials=int(trials), seed=int(seed))
            if emu.ok:
                st.success(f"{emu.recoveries} recoveries over {emu.databases} databases, no failures.")
            else:
                st.error(f"{len(emu.failures)} failed recoveries")
                st.write([str(f) for f in emu.failures[:20]])

        slug = family_slug(out.family)
        st.download_button("Download code (JSON)", save_code(out.code), file_name=f"{slug}.json")
        st.download_button("Download certificate (JSON)", save_certificate(out.certificate), file_name=f"{slug}.cert.json")

with tab_verify:
    st.subheader("Verify an uploaded code")
    use_example = st.checkbox("Use the bundled [7x4, 12] example", value=True)
    uploaded = st.file_uploader("Code file (.json)", type=["json"])
    uploaded_cert = st.file_uploader("Certificate file (.json, optional)", type=["json"])

    code = None
    try:
        if uploaded is not None:
            code = load_code(uploaded.getvalue())
        elif use_example:
            code = paper_example()
    except PirArrayError as e:
        st.error(f"Cannot read code: {e}")

    if code is not None:
        st.write(f"p={code.p}, t={code.t}, m={code.m}, s={frac_str(code.s)}")
        st.dataframe(pd.DataFrame(render_array(code)), use_container_width=True)
        if st.button("Compute k"):
            with st.spinner("Enumerating recovery sets and packing..."):
                report = exact_k(code, exact_limit=int(exact_limit))
            mode = "exact" if report.exact else "lower bound"
            st.success(f"k={report.k} ({mode}), rate={frac_str(report.rate)}")
            st.dataframe(
                pd.DataFrame([{"part": f"x_{r.part + 1}", "max_disjoint": r.max_disjoint, "exact": r.exact} for r in report.parts]),
                use_container_width=True,
            )
        if uploaded_cert is not None:
            try:
                cert = load_certificate(uploaded_cert.getvalue())
                ok, violation = check_certificate(code, cert)
                if ok:
                    st.success(f"Certificate passes with k={cert.claimed_k}")
                else:
                    st.error(f"Certificate fails: {violation}")
            except PirArrayError as e:
                st.error(f"Cannot read certificate: {e}")

with tab_bounds:
    st.subheader("Single (s, t)")
    col_a, col_b = st.columns(2)
    with col_a:
        bs = st.text_input("s", value="7/3", key="bounds_s")
    with col_b:
        bt = st.number_input("t", min_value=1, value=3, step=1, key="bounds_t")
    try:
        rep = bound_report(parse_rational(bs), int(bt))
        rows = [{"side": "lower", "source": lab, "value": frac_str(v), "approx": float(v)} for lab, v in rep.lower]
        rows += [{"side": "upper", "source": lab, "value": frac_str(v), "approx": float(v)} for lab, v in rep.upper]
        if rep.limit is not None:
            lab, v = rep.limit
            rows.append({"side": "limit", "source": lab, "value": frac_str(v), "approx": float(v)})
        st.dataframe(pd.DataFrame(rows), use_container_width=True)
        if rep.tight:
            st.success(f"Tight: g({frac_str(rep.s)}, {rep.t}) = {frac_str(rep.best_lower)}")
        if rep.notes:
            st.info(rep.notes)
    except PirArrayError as e:
        st.error(str(e))

    st.subheader("Table")
    s_list = st.text_input("s values (comma separated)", value="3/2,2,3")
    t_max = st.number_input("t up to", min_value=1, value=4, step=1)
    try:
        reports = bound_table([parse_rational(x) for x in s_list.split(",") if x.strip()], range(1, int(t_max) + 1))
        df = bound_table_frame(reports, with_floats=True)
        st.dataframe(df, use_container_width=True)

        tmpdir = tempfile.mkdtemp()
        out_xlsx = os.path.join(tmpdir, "bounds.xlsx")
        save_table(df, out_xlsx)
        with open(out_xlsx, "rb") as f:
            st.download_button("Download XLSX", f, file_name="bounds.xlsx")
        st.download_button("Download CSV", df.to_csv(index=False), file_name="bounds.csv")
    except PirArrayError as e:
        st.error(str(e))
