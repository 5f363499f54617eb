import streamlit as st

from config.settings import DISPLAY_SETTINGS, REPORT_COLUMNS
from config.help_texts import FILE_UPLOAD_TEXTS, PAGE_DESCRIPTIONS
from config.ui_styles import PAGE_CSS, SECTION_HEADER_TEMPLATE
from utils.report import check_report_columns, decode_report


def show():
    """レポート読み込みページを表示"""
    st.markdown(PAGE_CSS, unsafe_allow_html=True)
    st.markdown(SECTION_HEADER_TEMPLATE.format(**PAGE_DESCRIPTIONS['upload']), unsafe_allow_html=True)

    with st.expander("レポート形式ガイド", expanded=False):
        st.markdown("bench.py が出力するバッチ単位のレポートです。列は次の順で固定です。")
        st.code(",".join(REPORT_COLUMNS))
        st.markdown("JSON形式では、各行に `warmup` と `trigger_events`（[op_index, from, to]）が加わります。")

    st.markdown('<div class="step-title">レポートファイルアップロード</div>', unsafe_allow_html=True)
    st.markdown(f'<div class="step-annotation">{FILE_UPLOAD_TEXTS["instruction"]}</div>', unsafe_allow_html=True)

    uploaded_file = st.file_uploader(
        "ファイル選択",
        type=['csv', 'json'],
        help=FILE_UPLOAD_TEXTS['help'],
        label_visibility="collapsed"
    )

    if uploaded_file is not None and st.session_state.report_filename != uploaded_file.name:
        try:
            df, encoding = decode_report(uploaded_file.getvalue(), uploaded_file.name)
        except Exception as e:
            st.error(f"ファイルの読み込みに失敗しました: {e}")
            return

        is_valid, missing = check_report_columns(df)
        if not is_valid:
            st.error(FILE_UPLOAD_TEXTS['missing_columns_template'].format(columns=", ".join(missing)))
            return

        st.session_state.report = df
        st.session_state.report_filename = uploaded_file.name
        st.success(FILE_UPLOAD_TEXTS['success_template'].format(rows=len(df), cols=len(df.columns), encoding=encoding))

    if st.session_state.report is not None:
        df = st.session_state.report
        st.markdown('<div class="step-title">プレビュー</div>', unsafe_allow_html=True)
        col1, col2, col3 = st.columns(3)
        col1.metric("実験", df['experiment'].nunique())
        col2.metric("エンジン", df['engine'].nunique())
        col3.metric("シード", df['seed'].nunique())
        st.dataframe(df.head(DISPLAY_SETTINGS['max_preview_rows']), use_container_width=True, hide_index=True)
