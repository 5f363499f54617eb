import streamlit as st
import plotly.graph_objects as go

from config.settings import DISPLAY_SETTINGS
from config.constants import ENGINE_DISPLAY_NAMES, UNIFIED_COLOR_PALETTE
from config.help_texts import CHART_TEXTS, COMMON_MESSAGES, PAGE_DESCRIPTIONS
from config.ui_styles import PAGE_CSS, SECTION_HEADER_TEMPLATE
from utils.report import batch_series, trigger_batches


def show():
    """バッチ推移ページを表示"""
    st.markdown(PAGE_CSS, unsafe_allow_html=True)
    st.markdown(SECTION_HEADER_TEMPLATE.format(**PAGE_DESCRIPTIONS['batch_trend']), unsafe_allow_html=True)

    df = st.session_state.report
    if df is None:
        st.warning(COMMON_MESSAGES['data_not_found'])
        return

    col1, col2 = st.columns(2)
    with col1:
        experiment = st.selectbox("実験", sorted(df['experiment'].unique()))
    with col2:
        seeds = sorted(df[df['experiment'] == experiment]['seed'].unique())
        seed = st.selectbox("シード", seeds)

    series = batch_series(df, experiment, seed)
    if series.empty:
        st.info(COMMON_MESSAGES['no_rows'])
        return

    st.markdown('<div class="step-title">スループット</div>', unsafe_allow_html=True)
    st.plotly_chart(_line_chart(series, 'throughput_ops_s', CHART_TEXTS['throughput_axis']), use_container_width=True)

    st.markdown('<div class="step-title">平均displacement</div>', unsafe_allow_html=True)
    st.plotly_chart(_line_chart(series, 'avg_displacement', CHART_TEXTS['displacement_axis']), use_container_width=True)
    st.caption(CHART_TEXTS['warmup_note'])

    triggers = trigger_batches(series)
    if not triggers.empty:
        st.markdown('<div class="step-title">遷移が起きたバッチ</div>', unsafe_allow_html=True)
        st.dataframe(
            triggers[['engine', 'batch', 'learn_triggers', 'sense_triggers', 'mode_learn_ops', 'mode_sense_ops', 'mode_default_ops']],
            use_container_width=True,
            hide_index=True
        )


def _line_chart(series, column, axis_title):
    fig = go.Figure()

    for engine, rows in series.groupby('engine', sort=True):
        fig.add_trace(go.Scatter(
            x=rows['batch'],
            y=rows[column],
            mode='lines+markers',
            name=ENGINE_DISPLAY_NAMES.get(engine, engine),
            line=dict(color=UNIFIED_COLOR_PALETTE.get(engine, '#333333'), width=2),
            marker=dict(size=5)
        ))

        learn_rows = rows[rows['learn_triggers'] > 0]
        if not learn_rows.empty:
            fig.add_trace(go.Scatter(
                x=learn_rows['batch'],
                y=learn_rows[column],
                mode='markers',
                name=f"{ENGINE_DISPLAY_NAMES.get(engine, engine)} {CHART_TEXTS['learn_marker']}",
                marker=dict(color=UNIFIED_COLOR_PALETTE['learn'], size=11, symbol='triangle-up')
            ))

    fig.update_layout(
        xaxis_title=CHART_TEXTS['batch_axis'],
        yaxis_title=axis_title,
        height=DISPLAY_SETTINGS['default_chart_height'],
        legend=dict(orientation="h", yanchor="bottom", y=1.02, xanchor="right", x=1),
        hovermode='x unified',
        margin=dict(l=10, r=10, t=30, b=10),
        plot_bgcolor='rgba(0,0,0,0)',
        paper_bgcolor='rgba(0,0,0,0)'
    )
    fig.update_xaxes(showgrid=True, gridcolor='rgba(128,128,128,0.2)')
    fig.update_yaxes(showgrid=True, gridcolor='rgba(128,128,128,0.2)')
    return fig
